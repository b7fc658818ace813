// Seeded input generators for runs, diffs and benchmarks.
//
// Specs:
//   int                 integer in [-100, 100]
//   list:N | list:A..B  list of ints in [0, 99]; length N, or uniform in [A, B]
//   sortedlist:N        nondecreasing list (also accepts A..B)
//   lists:NxM           list of N lists of M ints
//   tree:D              Leaf | Node(left, int, right) of depth at most D
//   cmmlike:N           chain of N Clet / Csequence / Cifthenelse nodes that
//                       continues in the last field, ending in a leaf
//   cmmthen:N           chain of N Cifthenelse nodes continuing in `then`
//
// Any other text is parsed as a value literal.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "tmc/runtime.hpp"

namespace tmc {

/// 64-bit linear congruential generator (Knuth's MMIX constants). Outputs
/// the high 32 bits of the state.
class Lcg {
public:
    explicit Lcg(std::uint64_t seed) : state_(seed) { next(); }

    std::uint32_t next() {
        state_ = state_ * 6364136223846793005ULL + 1442695040888963407ULL;
        return static_cast<std::uint32_t>(state_ >> 32);
    }
    /// Uniform in [lo, hi].
    std::int64_t range(std::int64_t lo, std::int64_t hi) {
        auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(next() % span);
    }

private:
    std::uint64_t state_;
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Builds the value described by `spec` in `store`. Throws UsageError on a
/// malformed spec.
Value gen_value(const std::string& spec, std::uint64_t seed, Store& store);

/// True if `spec` names a generator whose size can be substituted.
bool is_sized_spec(const std::string& spec);

/// `list:5` with size 100 becomes `list:100`; unsized specs are unchanged.
std::string with_size(const std::string& spec, std::uint64_t size);

}  // namespace tmc
