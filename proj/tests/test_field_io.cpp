#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "halfwave/field_io.hpp"
#include "halfwave/report.hpp"

using namespace hw;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)),
                       std::istreambuf_iterator<char>());
}

void spit(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

struct TempDir {
    std::filesystem::path dir;
    TempDir() {
        dir = std::filesystem::temp_directory_path() / "hwf1_test";
        std::filesystem::create_directories(dir);
    }
    std::string path(const char* name) const { return (dir / name).string(); }
};

}  // namespace

TEST_CASE("HWF1 round trip is bit exact") {
    TempDir td;
    auto grid = make_grid(32, 17.5);
    Rng rng(42);
    Field f = random_smooth_field(grid, rng);
    const std::string p1 = td.path("a.hwf");
    const std::string p2 = td.path("b.hwf");
    save_field(f, p1);
    const Field g = load_field(p1);
    CHECK(g.grid().n() == 32);
    CHECK(g.grid().box_length() == 17.5);
    CHECK(g.space() == Space::physical);
    save_field(g, p2);
    CHECK(slurp(p1) == slurp(p2));
    for (std::size_t i = 0; i < f.size(); ++i)
        CHECK(f.values()[i] == g.values()[i]);  // exact, not approximate
}

TEST_CASE("frequency-tagged fields keep their tag") {
    TempDir td;
    auto grid = make_grid(16, 8.0);
    Rng rng(1);
    Field f = random_smooth_field(grid, rng).to(Space::frequency);
    save_field(f, td.path("freq.hwf"));
    CHECK(load_field(td.path("freq.hwf")).space() == Space::frequency);
}

TEST_CASE("corrupted magic and truncation are typed format errors") {
    TempDir td;
    auto grid = make_grid(16, 8.0);
    Rng rng(2);
    Field f = random_smooth_field(grid, rng);
    const std::string p = td.path("c.hwf");
    save_field(f, p);

    std::string bytes = slurp(p);
    std::string bad = bytes;
    bad[0] = 'X';
    spit(td.path("bad_magic.hwf"), bad);
    CHECK_THROWS_WITH_AS(load_field(td.path("bad_magic.hwf")),
                         doctest::Contains("bad magic"), Error);

    spit(td.path("short.hwf"), bytes.substr(0, bytes.size() - 7));
    CHECK_THROWS_AS(load_field(td.path("short.hwf")), Error);

    CHECK_THROWS_AS(load_field(td.path("missing.hwf")), Error);
}

TEST_CASE("byte-swapped header fields are rejected, not misread") {
    TempDir td;
    auto grid = make_grid(16, 8.0);
    Rng rng(3);
    save_field(random_smooth_field(grid, rng), td.path("d.hwf"));
    std::string bytes = slurp(td.path("d.hwf"));
    // Swap the u32 version and u64 n as a big-endian writer would produce.
    std::reverse(bytes.begin() + 4, bytes.begin() + 8);
    std::reverse(bytes.begin() + 8, bytes.begin() + 16);
    spit(td.path("swapped.hwf"), bytes);
    CHECK_THROWS_AS(load_field(td.path("swapped.hwf")), Error);
}

TEST_CASE("bad n and bad tag are rejected") {
    TempDir td;
    auto grid = make_grid(16, 8.0);
    Rng rng(4);
    save_field(random_smooth_field(grid, rng), td.path("e.hwf"));
    std::string bytes = slurp(td.path("e.hwf"));

    std::string bad_n = bytes;
    const std::uint64_t n17 = 17;
    std::memcpy(bad_n.data() + 8, &n17, sizeof(n17));
    spit(td.path("bad_n.hwf"), bad_n);
    CHECK_THROWS_AS(load_field(td.path("bad_n.hwf")), Error);

    std::string bad_tag = bytes;
    bad_tag[24] = 7;
    spit(td.path("bad_tag.hwf"), bad_tag);
    CHECK_THROWS_AS(load_field(td.path("bad_tag.hwf")), Error);
}
