#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "support/json_writer.hpp"
#include "support/numeric.hpp"
#include "support/parallel.hpp"
#include "support/rng.hpp"

using namespace pdmpstop;

TEST_CASE("rng streams replay bit-exactly and differ across identities") {
    Rng a(RngStream(42, "test", 7));
    Rng b(RngStream(42, "test", 7));
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

    std::set<std::uint64_t> firsts;
    firsts.insert(Rng(RngStream(42, "test", 7)).next_u64());
    firsts.insert(Rng(RngStream(42, "test", 8)).next_u64());
    firsts.insert(Rng(RngStream(42, "other", 7)).next_u64());
    firsts.insert(Rng(RngStream(43, "test", 7)).next_u64());
    CHECK(firsts.size() == 4);
}

TEST_CASE("uniform draws live in [0,1) and exponential draws are positive") {
    Rng r(RngStream(1, "u"));
    for (int i = 0; i < 10000; ++i) {
        double u = r.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
    Rng e(RngStream(1, "e"));
    for (int i = 0; i < 10000; ++i) CHECK(e.exponential() > 0.0);
}

TEST_CASE("simpson integrates smooth functions to tolerance") {
    double val = integrate_simpson([](double x) { return std::sin(x); }, 0.0, 1.0, 1e-10);
    CHECK(val == doctest::Approx(1.0 - std::cos(1.0)).epsilon(1e-9));
    CHECK(integrate_simpson([](double x) { return 3.0 * x; }, 0.0, 0.5, 1e-10) ==
          doctest::Approx(0.375).epsilon(1e-12));
    CHECK(integrate_simpson([](double) { return 1.0; }, 2.0, 2.0, 1e-10) == 0.0);
}

TEST_CASE("monotone inversion finds the smallest crossing") {
    auto f = [](double t) { return 1.5 * t * t; };
    double t = invert_nondecreasing(f, 0.0, 1.0, 0.375, 1e-12);
    CHECK(t == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(invert_nondecreasing(f, 0.0, 1.0, 0.0, 1e-12) == 0.0);
}

TEST_CASE("scan+golden maximization locates an interior peak") {
    auto f = [](double x) { return x * std::exp(-3.0 * x * x); };
    double xm = maximize_scan_golden(f, 0.0, 1.0, 100, 1e-10);
    CHECK(xm == doctest::Approx(1.0 / std::sqrt(6.0)).epsilon(1e-6));
}

TEST_CASE("parallel chunking covers the range once, any thread count") {
    for (int threads : {1, 3, 8}) {
        set_max_threads(threads);
        std::vector<int> hits(1000, 0);
        parallel_chunks(hits.size(), [&](std::size_t, std::size_t b, std::size_t e) {
            for (std::size_t i = b; i < e; ++i) hits[i] += 1;
        });
        for (int h : hits) CHECK(h == 1);
    }
    set_max_threads(0);
}

TEST_CASE("json writer emits 17-significant-digit doubles that round-trip") {
    double v = 0.1234567890123456789;
    std::string s = JsonWriter::format_double(v);
    CHECK(std::stod(s) == v);
    JsonWriter w;
    w.begin_object();
    w.kv("x", 1.0 / 3.0);
    w.key("arr");
    w.array(std::vector<double>{1.0, 2.5});
    w.end_object();
    std::string out = w.take();
    CHECK(out.find("0.33333333333333331") != std::string::npos);
    CHECK(out.find("\"arr\"") != std::string::npos);
}
