#pragma once

#include <array>
#include <string_view>

namespace dumpscrub {
namespace words {

// Non-sensitive filler vocabulary for generated pages. Kept disjoint from the
// name and gender dictionaries below so that generated filler can never match
// a dictionary identifier (asserted in the unit suite).
inline constexpr std::array<std::string_view, 132> filler = {
    "buffer",   "kernel",   "module",   "packet",   "socket",   "thread",
    "mutex",    "queue",    "stack",    "heap",     "cache",    "index",
    "table",    "record",   "field",    "offset",   "frame",    "driver",
    "device",   "sector",   "cluster",  "mount",    "volume",   "inode",
    "region",   "segment",  "handle",   "lexer",    "parser",   "symbol",
    "branch",   "opcode",   "fetch",    "store",    "load",     "shift",
    "carry",    "status",   "control",  "signal",   "event",    "timer",
    "clock",    "cycle",    "reset",    "vector",   "trap",     "fault",
    "abort",    "retry",    "limit",    "quota",    "batch",    "chunk",
    "merge",    "split",    "scan",     "probe",    "trace",    "debug",
    "audit",    "level",    "input",    "output",   "stream",   "file",
    "path",     "route",    "bridge",   "switch",   "relay",    "proxy",
    "server",   "client",   "session",  "channel",  "message",  "header",
    "footer",   "trailer",  "length",   "width",    "height",   "depth",
    "count",    "total",    "ratio",    "scale",    "factor",   "metric",
    "sample",   "window",   "period",   "phase",    "state",    "machine",
    "model",    "logic",    "array",    "list",     "tree",     "graph",
    "node",     "edge",     "root",     "leaf",     "child",    "parent",
    "sibling",  "visit",    "order",    "loop",     "nest",     "scope",
    "address",  "pointer",  "registry", "syscall",  "daemon",   "worker",
    "journal",  "ledger",   "archive",  "snapshot", "replica",  "shard",
    "bucket",   "cursor",   "spool",    "latch",    "fence",    "quorum",
};

inline constexpr std::array<std::string_view, 168> person_names = {
    "james",     "john",      "robert",    "michael",   "william",   "david",
    "richard",   "joseph",    "thomas",    "charles",   "daniel",    "matthew",
    "anthony",   "donald",    "steven",    "paul",      "andrew",    "joshua",
    "kenneth",   "kevin",     "brian",     "george",    "edward",    "ronald",
    "timothy",   "jason",     "jeffrey",   "ryan",      "jacob",     "gary",
    "nicholas",  "eric",      "jonathan",  "stephen",   "larry",     "justin",
    "scott",     "brandon",   "benjamin",  "samuel",    "gregory",   "frank",
    "alexander", "raymond",   "patrick",   "jack",      "dennis",    "jerry",
    "tyler",     "aaron",     "jose",      "adam",      "nathan",    "henry",
    "douglas",   "zachary",   "peter",     "kyle",      "walter",    "ethan",
    "jeremy",    "harold",    "keith",     "christian", "roger",     "noah",
    "gerald",    "carl",      "terry",     "sean",      "austin",    "arthur",
    "lawrence",  "jesse",     "dylan",     "bryan",     "jordan",    "billy",
    "bruce",     "albert",    "willie",    "gabriel",   "logan",     "alan",
    "juan",      "wayne",     "roy",       "ralph",     "randy",     "eugene",
    "vincent",   "russell",   "elijah",    "louis",     "bobby",     "philip",
    "johnny",    "mary",      "patricia",  "jennifer",  "linda",     "elizabeth",
    "barbara",   "susan",     "jessica",   "sarah",     "karen",     "lisa",
    "nancy",     "betty",     "margaret",  "sandra",    "ashley",    "kimberly",
    "emily",     "donna",     "michelle",  "carol",     "amanda",    "dorothy",
    "melissa",   "deborah",   "stephanie", "rebecca",   "sharon",    "laura",
    "cynthia",   "kathleen",  "amy",       "angela",    "shirley",   "anna",
    "brenda",    "pamela",    "emma",      "nicole",    "helen",     "samantha",
    "katherine", "christine", "debra",     "rachel",    "carolyn",   "janet",
    "catherine", "maria",     "heather",   "diane",     "ruth",      "julie",
    "olivia",    "joyce",     "virginia",  "victoria",  "kelly",     "lauren",
    "christina", "joan",      "evelyn",    "judith",    "megan",     "andrea",
    "hannah",    "gloria",    "teresa",    "alice",     "julia",     "sophia",
};

inline constexpr std::array<std::string_view, 8> gender_terms = {
    "male", "female", "m", "f", "man", "woman", "nonbinary", "transgender",
};

} // namespace words
} // namespace dumpscrub
