#include <catch_amalgamated.hpp>

#include <cstring>

#include <dumpscrub/errors.hpp>
#include <dumpscrub/input_parser.hpp>

using namespace dumpscrub;

namespace {

// Builds a page in-place: header plus an encoded payload.
void fill_page(uint8_t* dst, uint32_t asid, uint64_t logical, std::string_view payload,
               Encoding enc = Encoding::ascii) {
    PageHeader h;
    h.asid = asid;
    h.logical_address = logical;
    h.data_len = static_cast<uint16_t>(payload.size());
    write_page_header(dst, h);
    const std::string raw = encode_text(payload, enc);
    std::memcpy(dst + page_header_size, raw.data(), raw.size());
}

} // namespace

TEST_CASE("tokenizer extracts trimmed alphanumeric-bounded tokens") {
    const std::string text = "call alice@example.com, card=4539-5787-6362-1486; ...x2 -- a +ok+";
    std::vector<ParsedToken> tokens;
    tokenize_bytes(reinterpret_cast<const uint8_t*>(text.data()), text.size(), Encoding::ascii, 9,
                   100, tokens);
    std::vector<std::string> texts;
    for (const auto& t : tokens)
        texts.push_back(t.text);
    const std::vector<std::string> expected = {"call", "alice@example.com", "card",
                                               "4539-5787-6362-1486", "x2", "ok"};
    CHECK(texts == expected);
    // Provenance: byte offsets are relative to the supplied base.
    CHECK(tokens[0].byte_offset == 100);
    CHECK(tokens[0].page_index == 9);
    CHECK(tokens[1].byte_offset == 100 + text.find("alice"));
    CHECK(tokens[1].byte_len == std::string("alice@example.com").size());
}

TEST_CASE("tokenizer drops sub-2-character and unanchored runs") {
    const std::string text = "a bb . -- @+ c3 _d9_ +5+";
    std::vector<ParsedToken> tokens;
    tokenize_bytes(reinterpret_cast<const uint8_t*>(text.data()), text.size(), Encoding::ascii, 0,
                   0, tokens);
    std::vector<std::string> texts;
    for (const auto& t : tokens)
        texts.push_back(t.text);
    CHECK(texts == std::vector<std::string>{"bb", "c3", "d9"});
}

TEST_CASE("dump parse groups pages by asid ordered by logical address") {
    std::vector<uint8_t> dump(4 * page_size);
    fill_page(dump.data() + 0 * page_size, 7, 0x2000, "beta tokens here");
    fill_page(dump.data() + 1 * page_size, 3, 0x9000, "gamma data");
    fill_page(dump.data() + 2 * page_size, 7, 0x1000, "alpha words");
    fill_page(dump.data() + 3 * page_size, 3, 0x0500, "delta words");

    auto groups = parse_dump(dump, Encoding::ascii);
    REQUIRE(groups.size() == 2);
    // Groups keyed by asid in ascending order; pages sorted by address.
    CHECK(groups[0].asid == 3);
    REQUIRE(groups[0].pages.size() == 2);
    CHECK(groups[0].pages[0].page_index == 3); // 0x0500 before 0x9000
    CHECK(groups[0].pages[1].page_index == 1);
    CHECK(groups[1].asid == 7);
    CHECK(groups[1].pages[0].page_index == 2); // 0x1000 before 0x2000
    CHECK(groups[1].pages[1].page_index == 0);
    // Token stream follows page order within the group.
    REQUIRE(groups[1].tokens.size() == 5);
    CHECK(groups[1].tokens[0].text == "alpha");
    CHECK(groups[1].tokens[2].text == "beta");
    // group_id is the group's ordinal.
    CHECK(groups[0].group_id == 0);
    CHECK(groups[1].group_id == 1);
}

TEST_CASE("layout parse plus per-group tokenize equals whole-dump parse") {
    std::vector<uint8_t> dump(3 * page_size);
    fill_page(dump.data() + 0 * page_size, 1, 0x1000, "alice@example.com visits 94103");
    fill_page(dump.data() + 1 * page_size, 2, 0x1000, "male 536-90-4399");
    fill_page(dump.data() + 2 * page_size, 1, 0x2000, "tail page data");

    auto full = parse_dump(dump, Encoding::ascii);
    auto layout = parse_dump_layout(dump.data(), dump.size());
    REQUIRE(layout.size() == full.size());
    for (size_t i = 0; i < layout.size(); ++i) {
        CHECK(layout[i].tokens.empty());
        tokenize_group(dump.data(), layout[i], Encoding::ascii);
        REQUIRE(layout[i].tokens.size() == full[i].tokens.size());
        for (size_t t = 0; t < layout[i].tokens.size(); ++t) {
            CHECK(layout[i].tokens[t].text == full[i].tokens[t].text);
            CHECK(layout[i].tokens[t].byte_offset == full[i].tokens[t].byte_offset);
            CHECK(layout[i].tokens[t].page_index == full[i].tokens[t].page_index);
        }
    }
}

TEST_CASE("tokens never span page boundaries") {
    std::vector<uint8_t> dump(2 * page_size);
    // Page 0 payload ends with token chars; page 1 starts with token chars.
    std::string head(payload_capacity, 'x');
    fill_page(dump.data(), 5, 0x1000, head);
    fill_page(dump.data() + page_size, 5, 0x2000, "yyy more");
    auto groups = parse_dump(dump, Encoding::ascii);
    REQUIRE(groups.size() == 1);
    REQUIRE(groups[0].tokens.size() == 3);
    CHECK(groups[0].tokens[0].text == head);
    CHECK(groups[0].tokens[1].text == "yyy");
    CHECK(groups[0].tokens[1].page_index == 1);
    CHECK(groups[0].tokens[1].byte_offset == 0);
}

TEST_CASE("ebcdic payloads decode before tokenization") {
    std::vector<uint8_t> dump(page_size);
    fill_page(dump.data(), 1, 0, "card 4539578763621486 end", Encoding::ebcdic037);
    auto groups = parse_dump(dump, Encoding::ebcdic037);
    REQUIRE(groups.size() == 1);
    REQUIRE(groups[0].tokens.size() == 3);
    CHECK(groups[0].tokens[1].text == "4539578763621486");
    // Offsets refer to the raw payload bytes.
    CHECK(groups[0].tokens[1].byte_offset == 5);
}

TEST_CASE("dump parse validates sizes and headers") {
    std::vector<uint8_t> dump(page_size + 100); // trailing partial page
    fill_page(dump.data(), 1, 0, "ok");
    CHECK_THROWS_AS(parse_dump(dump.data(), dump.size(), Encoding::ascii), ParseError);
    CHECK_THROWS_AS(parse_dump(nullptr, 0, Encoding::ascii), ParseError);
    std::vector<uint8_t> bad(page_size, 0);
    CHECK_THROWS_AS(parse_dump(bad.data(), bad.size(), Encoding::ascii), ParseError);
}

TEST_CASE("log parse splits paragraphs with byte extents") {
    const std::string text = "first line\nsame paragraph\n\nsecond block 94103\n\n\nthird";
    auto groups = parse_log(text);
    REQUIRE(groups.size() == 3);
    CHECK(groups[0].log_begin == 0);
    CHECK(text.substr(groups[0].log_begin, groups[0].log_end - groups[0].log_begin) ==
          "first line\nsame paragraph");
    CHECK(text.substr(groups[1].log_begin, groups[1].log_end - groups[1].log_begin) ==
          "second block 94103");
    CHECK(text.substr(groups[2].log_begin, groups[2].log_end - groups[2].log_begin) == "third");
    // Tokens carry absolute offsets and the paragraph ordinal as page_index.
    REQUIRE(groups[1].tokens.size() == 3);
    CHECK(groups[1].tokens[2].text == "94103");
    CHECK(groups[1].tokens[2].byte_offset == text.find("94103"));
    CHECK(groups[1].tokens[2].page_index == 1);
    CHECK(groups[1].group_id == 1);
    CHECK(parse_log("").empty());
}
