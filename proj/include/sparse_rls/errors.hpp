#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sparse_rls {

class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Thrown when a thresholding parameter set does not yield an increasing
/// piecewise map (overlapping breakpoints or a non-positive middle slope).
class IllPosedThreshold : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

/// Malformed sample file. `line()` is 1-based; 0 when not tied to a line.
class FormatError : public std::runtime_error {
public:
    FormatError(const std::string& what, std::size_t line)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// A recursion produced a non-finite value. Carries whatever context the
/// throwing layer knows; outer layers rethrow with more filled in.
class NumericFailure : public std::runtime_error {
public:
    struct Context {
        long trial = -1;
        long iteration = -1;
        std::string algorithm;
    };

    static Context at_iteration(long n) {
        Context c;
        c.iteration = n;
        return c;
    }

    NumericFailure(std::string detail, Context ctx)
        : std::runtime_error(format(detail, ctx)), detail_(std::move(detail)), ctx_(std::move(ctx)) {}

    const Context& context() const noexcept { return ctx_; }
    const std::string& detail() const noexcept { return detail_; }

    NumericFailure with_trial(long trial) const {
        Context c = ctx_;
        c.trial = trial;
        return {detail_, c};
    }
    NumericFailure with_algorithm(std::string algorithm) const {
        Context c = ctx_;
        c.algorithm = std::move(algorithm);
        return {detail_, c};
    }

private:
    static std::string format(const std::string& detail, const Context& ctx) {
        std::string s = "numeric failure: " + detail;
        if (!ctx.algorithm.empty()) s += " [algorithm " + ctx.algorithm + "]";
        if (ctx.trial >= 0) s += " [trial " + std::to_string(ctx.trial) + "]";
        if (ctx.iteration >= 0) s += " [iteration " + std::to_string(ctx.iteration) + "]";
        return s;
    }

    std::string detail_;
    Context ctx_;
};

}  // namespace sparse_rls
