#include <catch_amalgamated.hpp>

#include <cstring>

#include <dumpscrub/dump_format.hpp>
#include <dumpscrub/errors.hpp>

using namespace dumpscrub;

TEST_CASE("page header layout is fixed and big-endian") {
    uint8_t buf[page_header_size];
    PageHeader h;
    h.asid = 0x01020304;
    h.logical_address = 0x1122334455667788ULL;
    h.flags = 0xA0B1;
    h.data_len = 4032;
    write_page_header(buf, h);

    CHECK(std::memcmp(buf, "KDMP", 4) == 0);
    CHECK(buf[4] == 0x00); // version 1, big-endian
    CHECK(buf[5] == 0x01);
    CHECK(buf[6] == 0x01);
    CHECK(buf[9] == 0x04);
    CHECK(buf[10] == 0x11);
    CHECK(buf[17] == 0x88);
    CHECK(buf[18] == 0xA0);
    CHECK(buf[19] == 0xB1);
    CHECK(buf[20] == 0x0F); // 4032 = 0x0FC0
    CHECK(buf[21] == 0xC0);
    for (size_t i = 22; i < page_header_size; ++i)
        CHECK(buf[i] == 0);
}

TEST_CASE("page header round-trips") {
    uint8_t buf[page_header_size];
    PageHeader h;
    h.asid = 7;
    h.logical_address = 0xDEADBEEF0000ULL;
    h.flags = 3;
    h.data_len = 17;
    write_page_header(buf, h);
    PageHeader r = parse_page_header(buf, 0);
    CHECK(r.asid == h.asid);
    CHECK(r.logical_address == h.logical_address);
    CHECK(r.flags == h.flags);
    CHECK(r.data_len == h.data_len);
}

TEST_CASE("parse rejects bad magic, version and oversized payload") {
    uint8_t buf[page_header_size];
    PageHeader h;
    h.data_len = 10;
    write_page_header(buf, h);

    uint8_t bad[page_header_size];
    std::memcpy(bad, buf, sizeof(buf));
    bad[0] = 'X';
    CHECK_THROWS_AS(parse_page_header(bad, 3), ParseError);

    std::memcpy(bad, buf, sizeof(buf));
    bad[5] = 2;
    CHECK_THROWS_AS(parse_page_header(bad, 0), ParseError);

    std::memcpy(bad, buf, sizeof(buf));
    bad[20] = 0x0F;
    bad[21] = 0xC1; // 4033 > capacity
    CHECK_THROWS_AS(parse_page_header(bad, 0), ParseError);
}

TEST_CASE("geometry constants") {
    CHECK(page_size == 4096);
    CHECK(page_header_size == 64);
    CHECK(payload_capacity == 4032);
    CHECK(page_size - page_header_size == payload_capacity);
}
