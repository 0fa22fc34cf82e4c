#include "doctest.h"

#include <set>
#include <sstream>

#include "sparse_rls/errors.hpp"
#include "sparse_rls/signal_model.hpp"

using namespace sparse_rls;

TEST_CASE("generate_sparse_system draws exactly r_true nonzero taps") {
    const auto sys = generate_sparse_system(100, 10, 7);
    CHECK(sys.m() == 100);
    CHECK(sys.r_true() == 10);
    CHECK((sys.taps.array() != 0.0).count() == 10);

    const std::set<std::size_t> support(sys.support.begin(), sys.support.end());
    CHECK(support.size() == 10);
    for (Eigen::Index i = 0; i < sys.taps.size(); ++i)
        CHECK((sys.taps[i] != 0.0) == (support.count(static_cast<std::size_t>(i)) == 1));
}

TEST_CASE("fully dense system covers every position") {
    const auto sys = generate_sparse_system(5, 5, 0);
    CHECK(sys.support == std::vector<std::size_t>{0, 1, 2, 3, 4});
    CHECK((sys.taps.array() != 0.0).all());
}

TEST_CASE("system generation is deterministic under a fixed seed") {
    const auto a = generate_sparse_system(100, 10, 7);
    const auto b = generate_sparse_system(100, 10, 7);
    CHECK(a.support == b.support);
    CHECK(a.taps == b.taps);
    CHECK(generate_sparse_system(100, 10, 8).taps != a.taps);
}

TEST_CASE("generate_sparse_system rejects bad sparsity") {
    CHECK_THROWS_AS(generate_sparse_system(5, 6, 0), InvalidArgument);
    CHECK_THROWS_AS(generate_sparse_system(5, 0, 0), InvalidArgument);
}

TEST_CASE("support positions are spread over the whole filter") {
    // each position should be hit about 2000 * 3 / 10 = 600 times
    std::vector<int> hits(10, 0);
    for (std::uint64_t seed = 0; seed < 2000; ++seed)
        for (auto i : generate_sparse_system(10, 3, seed).support) ++hits[i];
    for (int h : hits) CHECK(std::abs(h - 600) < 100);
}

TEST_CASE("noiseless replay of a known input sequence") {
    Vector taps(2);
    taps << 1.0, 0.0;
    SampleStream stream(make_system(taps), SignalConfig{2, 1.0, 0.0, 3});
    const auto s1 = stream.push(2.0);
    CHECK(s1.x[0] == 2.0);
    CHECK(s1.x[1] == 0.0);  // window starts empty
    CHECK(s1.d == 2.0);
    const auto s2 = stream.push(3.0);
    CHECK(s2.x[0] == 3.0);
    CHECK(s2.x[1] == 2.0);
    CHECK(s2.d == 3.0);
}

TEST_CASE("zero system emits pure noise with the configured variance") {
    SampleStream stream(make_system(Vector::Zero(4)), SignalConfig{4, 1.0, 0.005, 11});
    const int n = 100000;
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double d = stream.next().d;
        sum += d;
        sq += d * d;
    }
    const double mean = sum / n;
    const double var = sq / n - mean * mean;
    CHECK(std::abs(mean) < 5.0 * std::sqrt(0.005 / n));
    CHECK(var == doctest::Approx(0.005).epsilon(0.05));
}

TEST_CASE("input moments match the configuration") {
    const std::size_t m = 100;
    SampleStream stream(generate_sparse_system(m, 10, 1), SignalConfig{m, 1.0 / 100, 0.005, 5});
    const int n = 100000;
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = stream.next().x[0];
        sum += x;
        sq += x * x;
    }
    const double mean = sum / n;
    CHECK(std::abs(mean) < 5.0 * std::sqrt(0.01 / n));
    CHECK(sq / n - mean * mean == doctest::Approx(0.01).epsilon(0.05));
}

TEST_CASE("stream invariants: window shift, noiseless consistency, replay") {
    const std::size_t m = 8;
    const auto sys = generate_sparse_system(m, 3, 2);
    SampleStream a(sys, SignalConfig{m, 0.5, 0.0, 9});
    SampleStream b(sys, SignalConfig{m, 0.5, 0.0, 9});
    SamplePair prev = a.next();
    (void)b.next();
    for (int n = 0; n < 200; ++n) {
        const auto cur = a.next();
        const auto twin = b.next();
        CHECK(cur.x.tail(m - 1) == prev.x.head(m - 1));
        CHECK(cur.d - sys.taps.dot(cur.x) == 0.0);
        CHECK(cur.x == twin.x);
        CHECK(cur.d == twin.d);
        prev = cur;
    }
    CHECK(a.count() == 201);
}

TEST_CASE("stream rejects a mismatched system") {
    CHECK_THROWS_AS(SampleStream(make_system(Vector::Zero(3)), SignalConfig{4, 1.0, 0.0, 0}),
                    InvalidArgument);
    CHECK_THROWS_AS(SampleStream(make_system(Vector::Zero(3)), SignalConfig{3, 0.0, 0.0, 0}),
                    InvalidArgument);
}

TEST_CASE("sample files: write then read preserves order and values") {
    SampleStream stream(generate_sparse_system(2, 1, 4), SignalConfig{2, 1.0, 0.1, 4});
    std::vector<SamplePair> written{stream.next(), stream.next(), stream.next()};
    std::stringstream buf;
    write_samples(buf, written, 2);
    const auto read = read_samples(buf);
    REQUIRE(read.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(read[i].x == written[i].x);
        CHECK(read[i].d == written[i].d);
    }
}

TEST_CASE("sample files: empty input gives no samples") {
    std::stringstream empty;
    CHECK(read_samples(empty).empty());
}

TEST_CASE("sample files: malformed rows report their line") {
    std::stringstream extra("# m=2\n1,2,3\n1,2,3,4,5\n");
    try {
        read_samples(extra);
        FAIL("expected a format error");
    } catch (const FormatError& e) {
        CHECK(e.line() == 3);
    }

    std::stringstream bad_number("# m=1\n1,abc\n");
    CHECK_THROWS_AS(read_samples(bad_number), FormatError);

    std::stringstream no_header("1,2,3\n");
    CHECK_THROWS_AS(read_samples(no_header), FormatError);
}

TEST_CASE("Rng: Box-Muller output has unit moments") {
    Rng rng(123);
    const int n = 200000;
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = rng.normal();
        sum += z;
        sq += z * z;
    }
    CHECK(std::abs(sum / n) < 0.01);
    CHECK(sq / n == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("Rng: substreams differ per index") {
    CHECK(substream_seed(1, 0, 0) != substream_seed(1, 1, 0));
    CHECK(substream_seed(1, 0, 0) != substream_seed(1, 0, 1));
    CHECK(substream_seed(1, 0, 0) == substream_seed(1, 0, 0));
}
