#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "sparse_rls/random.hpp"

namespace sparse_rls {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Ground-truth tap-weight vector with a known support.
struct SparseSystem {
    Vector taps;
    std::vector<std::size_t> support;  // ascending

    std::size_t m() const { return static_cast<std::size_t>(taps.size()); }
    std::size_t r_true() const { return support.size(); }
};

struct SignalConfig {
    std::size_t m = 0;
    double input_variance = 0.0;
    double noise_variance = 0.0;
    std::uint64_t seed = 0;

    void validate() const;
};

/// One time step: regressor (most recent input first) and desired output.
struct SamplePair {
    Vector x;
    double d = 0.0;
};

/// r_true distinct positions drawn uniformly, values i.i.d. N(0, 1).
SparseSystem generate_sparse_system(std::size_t m, std::size_t r_true, std::uint64_t seed);

/// Builds a system from explicit taps; the support is every nonzero entry.
SparseSystem make_system(Vector taps);

/// Tapped-delay-line source driven by a white Gaussian input. The window
/// starts at zero and fills as inputs arrive.
class SampleStream {
public:
    SampleStream(SparseSystem system, SignalConfig cfg);

    /// Draws one input and one noise value, returns the next pair.
    SamplePair next();

    /// Shifts `input` into the window and draws only the noise. Used to
    /// replay a known input sequence.
    SamplePair push(double input);

    const SparseSystem& system() const { return system_; }
    std::size_t count() const { return count_; }

private:
    SparseSystem system_;
    SignalConfig cfg_;
    Rng rng_;
    Vector window_;
    std::size_t count_ = 0;
};

/// Free-function form of SampleStream::next.
inline SamplePair next_sample(SampleStream& stream) { return stream.next(); }

// CSV sample file: header `# m=<M>`, then `x_0,...,x_{M-1},d` per row.
void write_samples(std::ostream& out, std::span<const SamplePair> samples, std::size_t m);
void write_samples(const std::filesystem::path& path, std::span<const SamplePair> samples,
                   std::size_t m);
std::vector<SamplePair> read_samples(std::istream& in);
std::vector<SamplePair> load_samples(const std::filesystem::path& path);

}  // namespace sparse_rls
