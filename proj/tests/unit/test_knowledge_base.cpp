#include <catch_amalgamated.hpp>

#include <cstdio>

#include <json.hpp>

#include <dumpscrub/io.hpp>
#include <dumpscrub/knowledge_base.hpp>

using namespace dumpscrub;

TEST_CASE("mapping json parses direct, quasi and custom entries") {
    const auto j = nlohmann::json::parse(R"({
        "direct": ["EMAIL", "SSN"],
        "quasi": [{"entities": ["PERSON_NAME", "ZIPCODE"], "vicinity": 25}],
        "custom_identifiers": []
    })");
    SensitivityMapping m = mapping_from_json(j);
    REQUIRE(m.direct.size() == 2);
    REQUIRE(m.quasi.size() == 1);
    CHECK(m.quasi[0].vicinity == 25);
    CHECK(m.quasi[0].entities[1] == "ZIPCODE");

    CHECK_THROWS_AS(mapping_from_json(nlohmann::json::parse(R"({"unknown": 1})")), ConfigError);
    CHECK_THROWS_AS(
        mapping_from_json(nlohmann::json::parse(R"({"quasi": [{"entities": ["A"]}]})")),
        ConfigError); // group of one
    CHECK_THROWS_AS(mapping_from_json(nlohmann::json::parse(
                        R"({"quasi": [{"entities": ["A", "B"], "vicinity": 0}]})")),
                    ConfigError);
}

TEST_CASE("knowledge base rejects unknown mapping entities") {
    SensitivityMapping m;
    m.direct = {"NOT_REAL"};
    CHECK_THROWS_AS(build_knowledge_base(std::move(m), {}), ConfigError);
    SensitivityMapping q;
    q.quasi.push_back(QuasiGroup{{"PERSON_NAME", "NOPE"}, 10});
    CHECK_THROWS_AS(build_knowledge_base(std::move(q), {}), ConfigError);
}

TEST_CASE("minimal identifier set keeps only mapped entities") {
    SensitivityMapping m;
    m.direct = {"EMAIL"};
    m.quasi.push_back(QuasiGroup{{"PERSON_NAME", "ZIPCODE"}, 10});
    KnowledgeBase kb = build_knowledge_base(std::move(m), {});
    auto minimal = minimal_identifier_set(kb);
    REQUIRE(minimal.size() == 3);
    CHECK(minimal[0].name == "EMAIL");
    CHECK(minimal[1].name == "PERSON_NAME");
    CHECK(minimal[2].name == "ZIPCODE");

    // Forced-sensitive feedback pulls in the FEEDBACK dictionary.
    FeedbackStore fb;
    fb.force_sensitive.insert("secretword");
    KnowledgeBase kb2 = build_knowledge_base({}, fb);
    auto with_fb = minimal_identifier_set(kb2);
    REQUIRE(with_fb.size() == 1);
    CHECK(with_fb[0].name == std::string(feedback_entity));
    CHECK(with_fb[0].terms.count("secretword") == 1);
}

TEST_CASE("feedback store json round-trips") {
    FeedbackStore fb;
    fb.suppress.insert({"alice", "PERSON_NAME"});
    fb.suppress.insert({"94103", "ZIPCODE"});
    fb.force_sensitive.insert("projectx");
    const std::string path = "test_kb_feedback.json";
    save_feedback_store(path, fb);
    FeedbackStore back = load_feedback_store(path);
    CHECK(back.suppress == fb.suppress);
    CHECK(back.force_sensitive == fb.force_sensitive);
    std::remove(path.c_str());
}

TEST_CASE("augment normalizes, deduplicates and loads terms") {
    const std::string src = "test_kb_aug_src.txt";
    const std::string art = "test_kb_aug_art.txt";
    write_file_atomic(src, std::string("  Widget\nGADGET\r\nwidget\n\n  thing  \n"));
    const size_t n = ingest_augment(src, "PRODUCT", art);
    CHECK(n == 3);
    const std::string body = read_text_file(art);
    CHECK(body == "gadget\nthing\nwidget\n");

    Identifier id = load_augment_artifact(art, "PRODUCT");
    CHECK(id.kind == IdentifierKind::dictionary);
    CHECK(identifier_matches(id, "Widget"));
    CHECK(identifier_matches(id, "THING"));
    CHECK_FALSE(identifier_matches(id, "widgets"));

    CHECK_THROWS_AS(ingest_augment(src, "EMAIL", art), ConfigError); // built-in collision
    write_file_atomic(src, std::string("   \n\n"));
    CHECK_THROWS_AS(ingest_augment(src, "PRODUCT", art), ParseError);
    std::remove(src.c_str());
    std::remove(art.c_str());
}

TEST_CASE("custom identifiers join the knowledge base through the mapping") {
    const std::string art = "test_kb_custom.txt";
    write_file_atomic(art, std::string("alpha9\nbeta7\n"));
    SensitivityMapping m;
    m.direct = {"PROJECT_CODE"};
    m.custom_identifiers.push_back(CustomIdentifierRef{"PROJECT_CODE", art});
    KnowledgeBase kb = build_knowledge_base(std::move(m), {});
    REQUIRE(kb.find("PROJECT_CODE") != nullptr);
    CHECK(identifier_matches(*kb.find("PROJECT_CODE"), "ALPHA9"));
    // Identifier list stays alphabetical with the custom entry in place.
    for (size_t i = 1; i < kb.identifiers.size(); ++i)
        CHECK(kb.identifiers[i - 1].name < kb.identifiers[i].name);

    SensitivityMapping dup;
    dup.custom_identifiers.push_back(CustomIdentifierRef{"EMAIL", art});
    CHECK_THROWS_AS(build_knowledge_base(std::move(dup), {}), ConfigError);
    std::remove(art.c_str());
}
