#include <catch_amalgamated.hpp>

#include <filesystem>
#include <numbers>
#include <optional>

#include "gwave/io.hpp"
#include "gwave/random.hpp"

using namespace gwave;

namespace {

std::string temp_path(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "gwave_test_io";
    std::filesystem::create_directories(dir);
    return (dir / name).string();
}

} // namespace

TEST_CASE("filter JSON round trip") {
    Rng rng(81);
    for (int t = 0; t < 20; ++t) {
        const TrigPoly m = random_trig_poly(rng, -3, 4);
        const auto back = filter_from_json(json::parse(filter_to_json(m, 3).dump()));
        CHECK(back.branch_count == 3);
        CHECK(back.normalization == "correspondence");
        CHECK(max_distance(back.filter, m) == 0.0);
    }
}

TEST_CASE("Mallat-normalized files load in correspondence normalization") {
    const json j = json::parse(R"({"branch_count": 2, "normalization": "mallat", "kmin": 0, "coeffs": [0.5, 0.5]})");
    const auto f = filter_from_json(j);
    CHECK(f.normalization == "mallat");
    CHECK(max_distance(f.filter, haar_lowpass()) < 1e-15);
    const auto again = filter_from_json(json::parse(filter_to_json(haar_lowpass(), 2, "mallat").dump()));
    CHECK(max_distance(again.filter, haar_lowpass()) < 1e-15);
}

TEST_CASE("filter JSON defaults and errors") {
    const auto f = filter_from_json(json::parse(R"({"coeffs": [[1, 0], [0, 2]]})"));
    CHECK(f.branch_count == 2);
    CHECK(f.filter.kmin() == 0);
    CHECK(f.filter[1] == cplx(0.0, 2.0));

    auto code_of = [](const std::string& text) -> std::optional<ErrorCode> {
        try {
            filter_from_json(json::parse(text));
        } catch (const Error& e) {
            return e.code();
        }
        return std::nullopt;
    };
    CHECK(code_of(R"({"kmin": 0})") == ErrorCode::Io);
    CHECK(code_of(R"({"coeffs": [1], "normalization": "other"})") == ErrorCode::BadInput);
    CHECK(code_of(R"({"coeffs": ["x"]})") == ErrorCode::Io);
}

TEST_CASE("IFS JSON round trip") {
    const AffineIFS s = sierpinski_ifs();
    const AffineIFS back = ifs_from_json(json::parse(ifs_to_json(s).dump()));
    CHECK(back.dim == 2);
    REQUIRE(back.size() == 3);
    for (int i = 0; i < 3; ++i) {
        CHECK(back.maps[static_cast<std::size_t>(i)].A == s.maps[static_cast<std::size_t>(i)].A);
        CHECK(back.maps[static_cast<std::size_t>(i)].b == s.maps[static_cast<std::size_t>(i)].b);
    }
    CHECK(back.c1 == 0.5);
    CHECK(back.c2 == 0.5);

    try {
        ifs_from_json(json::parse(R"({"dim": 2, "maps": [{"A": [[0.5]], "b": [0, 0]}], "c1": 0.5, "c2": 0.5})"));
        FAIL("expected DIM_MISMATCH");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DimMismatch);
    }
    CHECK_THROWS_AS(ifs_from_json(json::parse(R"({"dim": 1, "maps": []})")), Error);
}

TEST_CASE("WordOp JSON round trip") {
    WordOp a(3);
    a.add({1, 2}, {3}, {0.5, -1.0});
    a.add({}, {}, 2.0);
    const WordOp back = wordop_from_json(json::parse(wordop_to_json(a).dump()));
    CHECK(back.alphabet_size() == 3);
    CHECK(equal(a, back));
    CHECK_THROWS_AS(wordop_from_json(json::parse(R"({"n": 2, "terms": [{"alpha": [3], "beta": []}]})")), Error);
}

TEST_CASE("sample CSV round trip") {
    const SampledFn f = sample([](double t) { return cplx(std::cos(t), std::sin(3.0 * t)); }, -2.0, 2.0, 1.0 / 8);
    const std::string path = temp_path("samples.csv");
    write_samples_csv(f, path);
    const SampledFn back = read_samples_csv(path);
    CHECK(back.size() == f.size());
    CHECK(back.t_min == f.t_min);
    CHECK(back.step == Catch::Approx(f.step).epsilon(1e-15));
    for (std::size_t k = 0; k < f.size(); ++k) CHECK(back.values[k] == f.values[k]);
    CHECK(read_text(path).rfind("t,re,im\n", 0) == 0);

    write_text(path, "t,re,im\n0,1,0\n0.5,1,0\n2,1,0\n");
    try {
        read_samples_csv(path);
        FAIL("expected GRID_MISMATCH");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::GridMismatch);
    }
    write_text(path, "t,re,im\n0,1\n");
    CHECK_THROWS_AS(read_samples_csv(path), Error);
    CHECK_THROWS_AS(read_text(temp_path("missing/none.csv")), Error);
}

TEST_CASE("point CSV") {
    PointCloud c{2, {0.0, 0.5, 0.25, 1.0}};
    CHECK(points_csv(c) == "x0,x1\n0,0.5\n0.25,1\n");
}

TEST_CASE("number and grid parsing") {
    CHECK(parse_number("1/256") == 1.0 / 256);
    CHECK(parse_number("-8") == -8.0);
    CHECK(parse_number("2.5e-1") == 0.25);
    for (const char* bad : {"", "x", "1/0", "1/2/3", "3abc"}) CHECK_THROWS_AS(parse_number(bad), Error);

    const GridSpec g = parse_grid("-8:8:1/256");
    CHECK(g.t_min == -8.0);
    CHECK(g.t_max == 8.0);
    CHECK(g.step == 1.0 / 256);
    CHECK_THROWS_AS(parse_grid("0:1"), Error);
    try {
        parse_grid("0:1:0.3");
        FAIL("expected GRID_MISMATCH");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::GridMismatch);
    }
}

TEST_CASE("format_double round-trips") {
    Rng rng(82);
    std::uniform_real_distribution<double> unif(-1e6, 1e6);
    for (int t = 0; t < 100; ++t) {
        const double x = unif(rng) * std::pow(10.0, t % 20 - 10);
        CHECK(std::stod(format_double(x)) == x);
    }
    CHECK(format_double(0.5) == "0.5");
}
