#include "sparse_rls/signal_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>

#include "sparse_rls/errors.hpp"
#include "sparse_rls/text.hpp"

namespace sparse_rls {

void SignalConfig::validate() const {
    if (m == 0) throw InvalidArgument("signal config: m must be positive");
    if (!(input_variance > 0.0) || !std::isfinite(input_variance))
        throw InvalidArgument("signal config: input_variance must be positive");
    if (!(noise_variance >= 0.0) || !std::isfinite(noise_variance))
        throw InvalidArgument("signal config: noise_variance must be nonnegative");
}

SparseSystem generate_sparse_system(std::size_t m, std::size_t r_true, std::uint64_t seed) {
    if (r_true < 1 || r_true > m)
        throw InvalidArgument("generate_sparse_system: need 1 <= r_true <= m (r_true=" +
                              std::to_string(r_true) + ", m=" + std::to_string(m) + ")");
    Rng rng(seed);

    // partial Fisher-Yates: the first r_true slots become the support
    std::vector<std::size_t> perm(m);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t i = 0; i < r_true; ++i) {
        const auto j = i + static_cast<std::size_t>(rng.index(m - i));
        std::swap(perm[i], perm[j]);
    }

    SparseSystem sys;
    sys.taps = Vector::Zero(static_cast<Eigen::Index>(m));
    sys.support.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(r_true));
    for (auto idx : sys.support) {
        double v = rng.normal();
        // a literal zero would silently shrink the support
        while (v == 0.0) v = rng.normal();
        sys.taps[static_cast<Eigen::Index>(idx)] = v;
    }
    std::sort(sys.support.begin(), sys.support.end());
    return sys;
}

SparseSystem make_system(Vector taps) {
    SparseSystem sys;
    sys.taps = std::move(taps);
    for (Eigen::Index i = 0; i < sys.taps.size(); ++i)
        if (sys.taps[i] != 0.0) sys.support.push_back(static_cast<std::size_t>(i));
    return sys;
}

SampleStream::SampleStream(SparseSystem system, SignalConfig cfg)
    : system_(std::move(system)), cfg_(cfg), rng_(cfg.seed) {
    cfg_.validate();
    if (system_.m() != cfg_.m)
        throw InvalidArgument("SampleStream: system length " + std::to_string(system_.m()) +
                              " does not match config m=" + std::to_string(cfg_.m));
    window_ = Vector::Zero(static_cast<Eigen::Index>(cfg_.m));
}

SamplePair SampleStream::next() {
    const double input = std::sqrt(cfg_.input_variance) * rng_.normal();
    return push(input);
}

SamplePair SampleStream::push(double input) {
    const auto m = window_.size();
    if (m > 1) {
        // shift toward older positions; segment copies alias, so go through eval
        window_.tail(m - 1) = window_.head(m - 1).eval();
    }
    window_[0] = input;
    const double noise = std::sqrt(cfg_.noise_variance) * rng_.normal();
    ++count_;
    return {window_, system_.taps.dot(window_) + noise};
}

void write_samples(std::ostream& out, std::span<const SamplePair> samples, std::size_t m) {
    out << "# m=" << m << '\n';
    for (const auto& s : samples) {
        if (static_cast<std::size_t>(s.x.size()) != m)
            throw InvalidArgument("write_samples: regressor length does not match m");
        for (Eigen::Index i = 0; i < s.x.size(); ++i) out << text::format_double(s.x[i]) << ',';
        out << text::format_double(s.d) << '\n';
    }
}

void write_samples(const std::filesystem::path& path, std::span<const SamplePair> samples,
                   std::size_t m) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot open " + path.string() + " for writing", 0);
    write_samples(out, samples, m);
}

std::vector<SamplePair> read_samples(std::istream& in) {
    std::vector<SamplePair> samples;
    std::string line;
    std::size_t lineno = 0;
    std::size_t m = 0;
    bool have_header = false;

    while (std::getline(in, line)) {
        ++lineno;
        const auto body = text::trim(line);
        if (body.empty()) continue;
        if (!have_header) {
            constexpr std::string_view prefix = "# m=";
            if (body.substr(0, prefix.size()) != prefix)
                throw FormatError("expected header '# m=<M>'", lineno);
            const auto parsed = text::parse_int(body.substr(prefix.size()));
            if (!parsed || *parsed < 1) throw FormatError("invalid filter length in header", lineno);
            m = static_cast<std::size_t>(*parsed);
            have_header = true;
            continue;
        }
        if (body.front() == '#') continue;

        const auto fields = text::split(body, ',');
        if (fields.size() != m + 1)
            throw FormatError("expected " + std::to_string(m + 1) + " fields, found " +
                                  std::to_string(fields.size()),
                              lineno);
        SamplePair s;
        s.x.resize(static_cast<Eigen::Index>(m));
        for (std::size_t i = 0; i <= m; ++i) {
            const auto v = text::parse_double(fields[i]);
            if (!v) throw FormatError("field " + std::to_string(i + 1) + " is not a number", lineno);
            if (i < m)
                s.x[static_cast<Eigen::Index>(i)] = *v;
            else
                s.d = *v;
        }
        samples.push_back(std::move(s));
    }
    return samples;
}

std::vector<SamplePair> load_samples(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open " + path.string(), 0);
    return read_samples(in);
}

}  // namespace sparse_rls
