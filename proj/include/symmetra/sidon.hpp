#pragma once

// B*[g] sets: representation profiles, maximal-set search for R(g,n) and
// C(g,n), and randomized constructions.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace symmetra {

/// A finite integer set together with its representation bound g.
///
/// Line sets live in {1,...,ambient_n}; modular sets (modulus present) in
/// {0,...,modulus-1} with ambient_n == modulus.
struct BstarSet {
    std::vector<std::int64_t> elements;
    std::int64_t ambient_n = 0;
    std::optional<std::int64_t> modulus;
    std::int64_t g = 0;

    std::int64_t size() const { return static_cast<std::int64_t>(elements.size()); }
    friend bool operator==(const BstarSet&, const BstarSet&) = default;
};

/// m -> #{(s1,s2) in S x S : s1 + s2 = m (mod modulus)}.
std::map<std::int64_t, std::int64_t> rep_profile(std::span<const std::int64_t> elements,
                                                 std::optional<std::int64_t> modulus = std::nullopt);

/// Largest value of the representation profile.
std::int64_t max_rep(std::span<const std::int64_t> elements,
                     std::optional<std::int64_t> modulus = std::nullopt);

/// Validates ranges, sorts and computes g.
BstarSet make_bstar_set(std::vector<std::int64_t> elements, std::int64_t ambient_n,
                        std::optional<std::int64_t> modulus = std::nullopt);

/// Independent re-check: elements distinct and in range, and g equals the
/// recomputed maximal representation count.
bool verify(const BstarSet& set);

struct SearchConfig {
    std::uint64_t budget = 100'000'000;  ///< search-tree nodes
    unsigned threads = 1;
};

struct SearchResult {
    std::int64_t size = 0;
    BstarSet witness;
    bool exact = false;
    std::uint64_t nodes = 0;
    double seconds = 0.0;
};

/// R(g,n): largest B*[g] subset of {1,...,n}. The witness is the
/// lexicographically smallest maximal set when the search is exact.
SearchResult search_R(std::int64_t g, std::int64_t n, const SearchConfig& config = {});

/// C(g,n): largest B*[g] (mod n) subset of Z/nZ, with 0 fixed in the set.
SearchResult search_C(std::int64_t g, std::int64_t n, const SearchConfig& config = {});

/// Inclusion probabilities and acceptance thresholds of a random construction.
struct RandomProfile {
    std::vector<double> probabilities;  ///< p_k, k = 1..n
    double expected_size = 0.0;         ///< E_0
    double size_radius = 0.0;           ///< a_0
    double expected_rep = 0.0;          ///< E_k (exact for the modular draw, an upper bound otherwise)
    double rep_radius = 0.0;            ///< a
    double min_size = 0.0;              ///< accept when |S| >= min_size
    double max_rep = 0.0;               ///< and every R_k <= max_rep
    bool guarantee_applies = true;      ///< the tail estimate's a < E/3 condition
};

/// Each residue drawn with probability eps; n odd.
RandomProfile modular_profile(double eps, std::int64_t n);

/// p_k = 1 for k < gamma/pi, sqrt(gamma/(pi k)) up to n.
RandomProfile integer_profile(double gamma, std::int64_t n);

struct RandomConfig {
    std::uint64_t seed = 1;
    int retry_cap = 1000;
    bool require_guarantee = false;  ///< reject parameters outside the a < E/3 regime
};

struct RandomResult {
    BstarSet set;
    RandomProfile profile;
    std::uint64_t seed = 0;
    int attempts = 0;
};

RandomResult random_modular(double eps, std::int64_t n, const RandomConfig& config = {});
RandomResult random_integer(double gamma, std::int64_t n, const RandomConfig& config = {});

}  // namespace symmetra
