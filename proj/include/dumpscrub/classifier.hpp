#pragma once

// Token classification: MRU-ordered identifier evaluation, direct/quasi
// sensitivity resolution over vicinity windows, per-vicinity quasi skipping
// and the boolean early-exit scan.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "errors.hpp"
#include "identifiers.hpp"
#include "input_parser.hpp"
#include "knowledge_base.hpp"
#include "modes.hpp"

namespace dumpscrub {

// none marks findings of identifiers outside the sensitivity mapping: the
// token is classified (and reported as non-sensitive) but never redacted.
// That keeps the output file invariant under the minimal-identifier
// optimization, which drops exactly those identifiers.
enum class Sensitivity { direct, quasi, feedback, none };

// Vicinity windows are token-count based by default; the pages unit demands
// co-occurrence on the same memory page instead.
enum class VicinityUnit { tokens, pages };

inline VicinityUnit vicinity_unit_from_name(std::string_view n) {
    if (n == "tokens")
        return VicinityUnit::tokens;
    if (n == "pages")
        return VicinityUnit::pages;
    throw ConfigError("unknown vicinity unit \"" + std::string(n) + "\" (expected tokens or pages)");
}

struct Finding {
    ParsedToken token;
    uint32_t token_ordinal = 0; // index into the group's token list
    std::string entity;
    Sensitivity sensitivity = Sensitivity::direct;
};

// Identifier evaluation order. A match moves its identifier to the front so
// runs of similar data probe the likely identifier first.
struct MruState {
    std::vector<uint32_t> order;

    void reset(size_t count) {
        order.resize(count);
        std::iota(order.begin(), order.end(), 0u);
    }

    void promote(size_t position) {
        if (position > 0)
            std::rotate(order.begin(), order.begin() + static_cast<ptrdiff_t>(position),
                        order.begin() + static_cast<ptrdiff_t>(position) + 1);
    }
};

// Per-window skip set: identifiers proven unable to yield a sensitive
// finding in the current window.
struct VicinityState {
    std::vector<uint8_t> skip; // parallel to the context's identifier list
};

struct QuasiGroupPlan {
    std::vector<uint32_t> members; // identifier indices
    uint32_t gate = 0;             // member that is always evaluated
    uint32_t vicinity = 100;
};

struct ClassifyStats {
    uint64_t tokens_seen = 0;
    uint64_t identifier_evals = 0;
    uint64_t evals_skipped = 0;

    void merge(const ClassifyStats& o) {
        tokens_seen += o.tokens_seen;
        identifier_evals += o.identifier_evals;
        evals_skipped += o.evals_skipped;
    }
};

// Immutable per-run classification plan derived from the knowledge base:
// the minimal identifier list plus precomputed sensitivity kinds, quasi
// group membership and the skip-gate assignment.
struct ClassifyContext {
    std::vector<Identifier> identifiers; // minimal set, alphabetical
    const FeedbackStore* feedback = nullptr;
    int32_t feedback_idx = -1;
    std::unordered_map<std::string_view, uint32_t> index_of; // views into identifiers' names
    std::vector<Sensitivity> kind;                           // per identifier
    std::vector<QuasiGroupPlan> groups;
    std::vector<std::vector<uint32_t>> groups_of; // per identifier: group indices
    std::vector<uint8_t> skippable;               // per identifier
    std::vector<uint32_t> gates;                  // distinct gate identifier indices
    uint32_t max_vicinity = 0;
    VicinityUnit unit = VicinityUnit::tokens;
    bool quasi_skip = false; // true when the block-skip scheme is active
    bool mru = true;         // false freezes the alphabetical order
};

inline ClassifyContext build_classify_context(const KnowledgeBase& kb,
                                              VicinityUnit unit = VicinityUnit::tokens,
                                              bool enable_quasi_skip = true,
                                              bool use_minimal_set = true, bool enable_mru = true) {
    ClassifyContext ctx;
    if (use_minimal_set) {
        ctx.identifiers = minimal_identifier_set(kb);
    } else {
        // Full knowledge base, with the feedback pseudo-identifier inserted
        // the same way the minimal set inserts it.
        ctx.identifiers = kb.identifiers;
        if (!kb.feedback.force_sensitive.empty()) {
            std::vector<std::string_view> terms(kb.feedback.force_sensitive.begin(),
                                                kb.feedback.force_sensitive.end());
            Identifier fb = detail::make_dictionary_identifier(std::string(feedback_entity), terms);
            auto at = std::lower_bound(ctx.identifiers.begin(), ctx.identifiers.end(), fb,
                                       [](const Identifier& a, const Identifier& b) {
                                           return a.name < b.name;
                                       });
            ctx.identifiers.insert(at, std::move(fb));
        }
    }
    ctx.feedback = &kb.feedback;
    ctx.unit = unit;
    ctx.mru = enable_mru;
    const size_t n = ctx.identifiers.size();
    for (uint32_t i = 0; i < n; ++i)
        ctx.index_of[ctx.identifiers[i].name] = i;
    auto fb = ctx.index_of.find(feedback_entity);
    ctx.feedback_idx = fb == ctx.index_of.end() ? -1 : static_cast<int32_t>(fb->second);

    const std::set<std::string> direct(kb.mapping.direct.begin(), kb.mapping.direct.end());
    std::set<std::string> quasi_names;
    for (const auto& g : kb.mapping.quasi)
        quasi_names.insert(g.entities.begin(), g.entities.end());
    ctx.kind.resize(n, Sensitivity::none);
    for (uint32_t i = 0; i < n; ++i) {
        const std::string& name = ctx.identifiers[i].name;
        if (static_cast<int32_t>(i) == ctx.feedback_idx)
            ctx.kind[i] = Sensitivity::feedback;
        else if (direct.count(name))
            ctx.kind[i] = Sensitivity::direct;
        else if (quasi_names.count(name))
            ctx.kind[i] = Sensitivity::quasi;
    }

    ctx.groups_of.resize(n);
    for (const auto& g : kb.mapping.quasi) {
        QuasiGroupPlan plan;
        plan.vicinity = g.vicinity;
        for (const auto& e : g.entities) {
            auto it = ctx.index_of.find(e);
            if (it == ctx.index_of.end())
                throw ConfigError("quasi group references unknown entity " + e);
            plan.members.push_back(it->second);
        }
        // The gate is the member that stays always-on and supplies the
        // absence evidence for skipping the others. Dictionaries are the
        // cheapest evaluators, so they gate first; names break ties.
        plan.gate = *std::min_element(plan.members.begin(), plan.members.end(),
                                      [&ctx](uint32_t a, uint32_t b) {
                                          const auto& ia = ctx.identifiers[a];
                                          const auto& ib = ctx.identifiers[b];
                                          bool da = ia.kind == IdentifierKind::dictionary;
                                          bool db = ib.kind == IdentifierKind::dictionary;
                                          if (da != db)
                                              return da;
                                          return ia.name < ib.name;
                                      });
        uint32_t gi = static_cast<uint32_t>(ctx.groups.size());
        for (uint32_t m : plan.members)
            ctx.groups_of[m].push_back(gi);
        ctx.groups.push_back(std::move(plan));
        ctx.max_vicinity = std::max(ctx.max_vicinity, g.vicinity);
    }

    ctx.skippable.assign(n, 0);
    std::set<uint32_t> gate_set;
    for (const auto& g : ctx.groups)
        gate_set.insert(g.gate);
    for (uint32_t i = 0; i < n; ++i) {
        if (ctx.kind[i] != Sensitivity::quasi || gate_set.count(i))
            continue;
        // Skippable only when every group this entity belongs to has a
        // different member as its gate (true by the exclusion above).
        ctx.skippable[i] = 1;
    }
    for (const auto& g : ctx.groups) {
        bool any_skippable = std::any_of(g.members.begin(), g.members.end(),
                                         [&ctx](uint32_t m) { return ctx.skippable[m] != 0; });
        if (any_skippable &&
            std::find(ctx.gates.begin(), ctx.gates.end(), g.gate) == ctx.gates.end())
            ctx.gates.push_back(g.gate);
    }
    ctx.quasi_skip = enable_quasi_skip && unit == VicinityUnit::tokens && !ctx.gates.empty();
    return ctx;
}

// Classifies one token: feedback force-list first, then identifiers in MRU
// order (honoring the skip set and length bounds), first match wins and is
// promoted to the front; the feedback suppress list is applied last.
inline std::optional<Finding> classify_token(const ParsedToken& tok, uint32_t ordinal, MruState& mru,
                                             const VicinityState* vic, const ClassifyContext& ctx,
                                             ClassifyStats* stats = nullptr) {
    if (stats)
        ++stats->tokens_seen;
    const std::string folded = detail::fold_ascii_lower(tok.text);
    if (ctx.feedback && !ctx.feedback->force_sensitive.empty() &&
        ctx.feedback->force_sensitive.count(folded))
        return Finding{tok, ordinal, std::string(feedback_entity), Sensitivity::feedback};
    for (size_t pos = 0; pos < mru.order.size(); ++pos) {
        const uint32_t idx = mru.order[pos];
        if (static_cast<int32_t>(idx) == ctx.feedback_idx)
            continue; // force list already consulted above
        if (vic && vic->skip[idx]) {
            if (stats)
                ++stats->evals_skipped;
            continue;
        }
        const Identifier& id = ctx.identifiers[idx];
        const size_t len = tok.text.size();
        if (len < id.min_len || len > id.max_len)
            continue;
        if (stats)
            ++stats->identifier_evals;
        if (!identifier_matches(id, tok.text, folded))
            continue;
        if (ctx.mru)
            mru.promote(pos);
        if (ctx.feedback && ctx.feedback->suppress.count({folded, id.name}))
            return std::nullopt;
        return Finding{tok, ordinal, id.name, ctx.kind[idx]};
    }
    return std::nullopt;
}

namespace detail {

// entity name -> ascending positions (token ordinals or page indices)
using PositionsIndex = std::unordered_map<std::string_view, std::vector<uint64_t>>;

inline bool finding_sensitive(const Finding& f, const PositionsIndex& positions,
                              const ClassifyContext& ctx) {
    if (f.sensitivity == Sensitivity::direct || f.sensitivity == Sensitivity::feedback)
        return true;
    if (f.sensitivity == Sensitivity::none)
        return false;
    auto self_it = ctx.index_of.find(f.entity);
    if (self_it == ctx.index_of.end())
        return false;
    const uint32_t idx = self_it->second;
    const uint64_t self =
        ctx.unit == VicinityUnit::tokens ? f.token_ordinal : f.token.page_index;
    for (uint32_t gi : ctx.groups_of[idx]) {
        const QuasiGroupPlan& g = ctx.groups[gi];
        bool all = true;
        for (uint32_t m : g.members) {
            if (m == idx)
                continue;
            auto it = positions.find(std::string_view(ctx.identifiers[m].name));
            if (it == positions.end()) {
                all = false;
                break;
            }
            const std::vector<uint64_t>& v = it->second;
            if (ctx.unit == VicinityUnit::tokens) {
                const uint64_t lo = self > g.vicinity ? self - g.vicinity : 0;
                auto p = std::lower_bound(v.begin(), v.end(), lo);
                if (p == v.end() || *p > self + g.vicinity) {
                    all = false;
                    break;
                }
            } else if (!std::binary_search(v.begin(), v.end(), self)) {
                all = false;
                break;
            }
        }
        if (all)
            return true;
    }
    return false;
}

inline PositionsIndex build_positions(const std::vector<Finding>& findings,
                                      const ClassifyContext& ctx) {
    PositionsIndex positions;
    for (const Finding& f : findings) {
        auto it = ctx.index_of.find(f.entity);
        std::string_view key =
            it == ctx.index_of.end() ? std::string_view(f.entity)
                                     : std::string_view(ctx.identifiers[it->second].name);
        positions[key].push_back(ctx.unit == VicinityUnit::tokens ? f.token_ordinal
                                                                  : f.token.page_index);
    }
    return positions;
}

} // namespace detail

// Direct and feedback findings are always sensitive; a quasi finding is
// sensitive iff some quasi group containing its entity has every co-member
// matched within that group's vicinity window. Returns a flag per finding.
inline std::vector<uint8_t> resolve_vicinity(const std::vector<Finding>& findings,
                                             const ClassifyContext& ctx) {
    std::vector<uint8_t> sensitive(findings.size(), 0);
    const detail::PositionsIndex positions = detail::build_positions(findings, ctx);
    for (size_t i = 0; i < findings.size(); ++i)
        sensitive[i] = detail::finding_sensitive(findings[i], positions, ctx) ? 1 : 0;
    return sensitive;
}

struct GroupResult {
    std::vector<Finding> findings;  // token order
    std::vector<uint8_t> sensitive; // parallel flags
    bool early_exit = false;        // boolean trigger fired or skip mode
    ClassifyStats stats;
};

namespace detail {

// Plain concise scan without the skip scheme.
inline void scan_all(const PageGroup& g, MruState& mru, const ClassifyContext& ctx, GroupResult& r) {
    for (uint32_t i = 0; i < g.tokens.size(); ++i) {
        auto f = classify_token(g.tokens[i], i, mru, nullptr, ctx, &r.stats);
        if (f)
            r.findings.push_back(std::move(*f));
    }
}

// Concise scan with per-vicinity skipping. Tokens are partitioned into
// blocks of twice the widest vicinity window. Stage one evaluates only the
// gate identifiers and counts their hits per block; an identifier that is
// exclusive to quasi groups may then be skipped for a block when every group
// it belongs to had zero gate hits across that block and both neighbors --
// no token of the block can have the gate within its window, so no skipped
// match could ever resolve as sensitive. Stage two is the normal MRU scan
// with those skip sets applied. Decisions are made only on closed blocks.
inline void scan_with_skips(const PageGroup& g, MruState& mru, const ClassifyContext& ctx,
                            GroupResult& r) {
    const size_t n = g.tokens.size();
    const uint64_t block_len = 2 * std::max<uint64_t>(1, ctx.max_vicinity);
    const size_t nblocks = (n + block_len - 1) / block_len;
    std::unordered_map<uint32_t, std::vector<uint32_t>> gate_hits;
    for (uint32_t gate : ctx.gates)
        gate_hits[gate].assign(nblocks, 0);
    for (size_t i = 0; i < n; ++i) {
        const ParsedToken& tok = g.tokens[i];
        const std::string folded = detail::fold_ascii_lower(tok.text);
        for (uint32_t gate : ctx.gates) {
            const Identifier& id = ctx.identifiers[gate];
            if (tok.text.size() < id.min_len || tok.text.size() > id.max_len)
                continue;
            ++r.stats.identifier_evals;
            if (identifier_matches(id, tok.text, folded))
                ++gate_hits[gate][i / block_len];
        }
    }
    std::vector<VicinityState> block_skips(nblocks);
    for (size_t k = 0; k < nblocks; ++k) {
        VicinityState& vs = block_skips[k];
        vs.skip.assign(ctx.identifiers.size(), 0);
        for (uint32_t idx = 0; idx < ctx.identifiers.size(); ++idx) {
            if (!ctx.skippable[idx])
                continue;
            bool skip = true;
            for (uint32_t gi : ctx.groups_of[idx]) {
                const auto& hits = gate_hits[ctx.groups[gi].gate];
                uint32_t around = hits[k];
                if (k > 0)
                    around += hits[k - 1];
                if (k + 1 < nblocks)
                    around += hits[k + 1];
                if (around != 0) {
                    skip = false;
                    break;
                }
            }
            vs.skip[idx] = skip ? 1 : 0;
        }
    }
    for (uint32_t i = 0; i < n; ++i) {
        auto f = classify_token(g.tokens[i], i, mru, &block_skips[i / block_len], ctx, &r.stats);
        if (f)
            r.findings.push_back(std::move(*f));
    }
}

// Boolean scan: classify tokens until some finding is definitely sensitive.
// A direct or feedback finding triggers immediately. A new quasi finding can
// complete the window of itself or of an earlier finding no farther back
// than the widest vicinity, so only that suffix needs rechecking.
inline void scan_boolean(const PageGroup& g, MruState& mru, const ClassifyContext& ctx,
                         GroupResult& r) {
    PositionsIndex positions;
    for (uint32_t i = 0; i < g.tokens.size(); ++i) {
        auto f = classify_token(g.tokens[i], i, mru, nullptr, ctx, &r.stats);
        if (!f)
            continue;
        {
            auto it = ctx.index_of.find(f->entity);
            std::string_view key =
                it == ctx.index_of.end() ? std::string_view(feedback_entity)
                                         : std::string_view(ctx.identifiers[it->second].name);
            positions[key].push_back(ctx.unit == VicinityUnit::tokens ? i
                                                                      : f->token.page_index);
        }
        r.findings.push_back(std::move(*f));
        const Finding& latest = r.findings.back();
        bool triggered =
            latest.sensitivity == Sensitivity::direct || latest.sensitivity == Sensitivity::feedback;
        // A new quasi finding may complete its own window or one of a recent
        // earlier finding; a never-sensitive finding cannot complete anything.
        if (!triggered && latest.sensitivity == Sensitivity::quasi) {
            for (auto it = r.findings.rbegin(); it != r.findings.rend(); ++it) {
                if (ctx.unit == VicinityUnit::tokens) {
                    if (it->token_ordinal + ctx.max_vicinity < i)
                        break;
                } else if (it->token.page_index != latest.token.page_index) {
                    break;
                }
                if (finding_sensitive(*it, positions, ctx)) {
                    triggered = true;
                    break;
                }
            }
        }
        if (triggered) {
            r.early_exit = true;
            break;
        }
    }
}

} // namespace detail

// Runs one page group through the requested mode. concise: full scan, all
// findings and their sensitivity flags. boolean: stops at the first finding
// that is definitely sensitive. skip: no scanning at all; the group counts
// as wholly sensitive.
inline GroupResult classify_group(const PageGroup& g, ProcessingMode mode, MruState& mru,
                                  const ClassifyContext& ctx) {
    GroupResult r;
    if (mode == ProcessingMode::skip) {
        r.early_exit = true;
        return r;
    }
    if (mode == ProcessingMode::boolean_mode) {
        detail::scan_boolean(g, mru, ctx, r);
        r.sensitive = resolve_vicinity(r.findings, ctx);
        return r;
    }
    if (ctx.quasi_skip && !g.tokens.empty())
        detail::scan_with_skips(g, mru, ctx, r);
    else
        detail::scan_all(g, mru, ctx, r);
    r.sensitive = resolve_vicinity(r.findings, ctx);
    return r;
}

} // namespace dumpscrub
