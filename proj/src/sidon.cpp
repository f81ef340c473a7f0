#include "symmetra/sidon.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "symmetra/errors.hpp"
#include "symmetra/random.hpp"

namespace symmetra {

std::map<std::int64_t, std::int64_t> rep_profile(std::span<const std::int64_t> elements,
                                                 std::optional<std::int64_t> modulus)
{
    if (modulus && *modulus < 1) throw std::invalid_argument("rep_profile: modulus must be positive");
    std::map<std::int64_t, std::int64_t> profile;
    for (auto a : elements)
        for (auto b : elements) {
            std::int64_t m = a + b;
            if (modulus) m = ((m % *modulus) + *modulus) % *modulus;
            ++profile[m];
        }
    return profile;
}

std::int64_t max_rep(std::span<const std::int64_t> elements, std::optional<std::int64_t> modulus)
{
    if (elements.empty()) return 0;
    if (modulus && *modulus < 1) throw std::invalid_argument("max_rep: modulus must be positive");
    auto [lo_it, hi_it] = std::minmax_element(elements.begin(), elements.end());
    std::int64_t lo = *lo_it;
    std::size_t width = modulus ? static_cast<std::size_t>(*modulus)
                                : static_cast<std::size_t>(2 * (*hi_it - lo) + 1);
    std::vector<std::int64_t> counts(width, 0);
    for (std::size_t i = 0; i < elements.size(); ++i) {
        for (std::size_t j = i; j < elements.size(); ++j) {
            std::int64_t idx;
            if (modulus) {
                idx = (elements[i] + elements[j]) % *modulus;
                if (idx < 0) idx += *modulus;
            } else {
                idx = elements[i] + elements[j] - 2 * lo;
            }
            counts[static_cast<std::size_t>(idx)] += (i == j) ? 1 : 2;
        }
    }
    return *std::max_element(counts.begin(), counts.end());
}

BstarSet make_bstar_set(std::vector<std::int64_t> elements, std::int64_t ambient_n,
                        std::optional<std::int64_t> modulus)
{
    if (ambient_n < 1) throw std::invalid_argument("B*[g] set: ambient n must be positive");
    if (modulus && *modulus != ambient_n)
        throw std::invalid_argument("B*[g] set: modulus must equal the ambient n");
    std::sort(elements.begin(), elements.end());
    if (std::adjacent_find(elements.begin(), elements.end()) != elements.end())
        throw std::invalid_argument("B*[g] set: repeated element");
    for (auto s : elements) {
        bool ok = modulus ? (s >= 0 && s < *modulus) : (s >= 1 && s <= ambient_n);
        if (!ok) throw std::out_of_range("B*[g] set: element " + std::to_string(s) + " out of range");
    }
    BstarSet out;
    out.g = max_rep(elements, modulus);
    out.elements = std::move(elements);
    out.ambient_n = ambient_n;
    out.modulus = modulus;
    return out;
}

bool verify(const BstarSet& set)
{
    if (set.ambient_n < 1) return false;
    if (set.modulus && *set.modulus != set.ambient_n) return false;
    std::vector<std::int64_t> sorted = set.elements;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;
    for (auto s : sorted) {
        bool ok = set.modulus ? (s >= 0 && s < *set.modulus) : (s >= 1 && s <= set.ambient_n);
        if (!ok) return false;
    }
    // Separate pass through the ordered-pair map rather than the counting array.
    std::int64_t g = 0;
    for (const auto& [m, count] : rep_profile(sorted, set.modulus)) g = std::max(g, count);
    return g == set.g;
}

namespace {

/// Incrementally maintained sum counts for a growing set.
class SumCounter {
public:
    SumCounter(std::int64_t g, std::int64_t sum_span, std::optional<std::int64_t> modulus)
        : g_(g), modulus_(modulus), counts_(static_cast<std::size_t>(sum_span), 0) {}

    bool try_add(std::int64_t x)
    {
        for (auto s : elems_)
            if (counts_[index(s + x)] + 2 > g_) return false;
        if (counts_[index(2 * x)] + 1 > g_) return false;
        for (auto s : elems_) counts_[index(s + x)] += 2;
        counts_[index(2 * x)] += 1;
        elems_.push_back(x);
        return true;
    }

    void pop()
    {
        std::int64_t x = elems_.back();
        elems_.pop_back();
        for (auto s : elems_) counts_[index(s + x)] -= 2;
        counts_[index(2 * x)] -= 1;
    }

    std::size_t size() const { return elems_.size(); }
    const std::vector<std::int64_t>& elements() const { return elems_; }

private:
    std::size_t index(std::int64_t m) const
    {
        return static_cast<std::size_t>(modulus_ ? m % *modulus_ : m);
    }

    std::int64_t g_;
    std::optional<std::int64_t> modulus_;
    std::vector<std::int64_t> counts_;
    std::vector<std::int64_t> elems_;
};

struct SharedBudget {
    std::atomic<std::uint64_t> nodes{0};
    std::uint64_t limit = 0;
    std::atomic<bool> exhausted{false};

    bool spend()
    {
        if (nodes.fetch_add(1, std::memory_order_relaxed) + 1 > limit) {
            exhausted.store(true, std::memory_order_relaxed);
            return false;
        }
        return true;
    }
};

/// Problem shape for a "find the lexicographically first set of a given
/// size" search. Candidates are first..last in increasing order; `first` is
/// always in the set (translation or rotation normalizes it there).
struct FindSpec {
    std::int64_t g;
    std::int64_t first;
    std::int64_t last;
    std::optional<std::int64_t> modulus;
    std::int64_t sum_span;
    /// Upper bound on how many elements can still be taken from [x, last].
    std::function<std::int64_t(std::int64_t x)> remaining_bound;
};

enum class FindStatus { found, infeasible, exhausted };

struct FindOutcome {
    FindStatus status;
    std::vector<std::int64_t> elements;
};

class Finder {
public:
    Finder(const FindSpec& spec, std::size_t target, SharedBudget& budget,
           const std::atomic<std::int64_t>& cutoff, std::int64_t branch)
        : spec_(spec), target_(target), budget_(budget), cutoff_(cutoff), branch_(branch) {}

    bool run(SumCounter& counter, std::int64_t next) { return dfs(counter, next); }

private:
    bool dfs(SumCounter& counter, std::int64_t next)
    {
        if (counter.size() == target_) return true;
        for (std::int64_t x = next; x <= spec_.last; ++x) {
            if (static_cast<std::int64_t>(counter.size()) + spec_.remaining_bound(x) <
                static_cast<std::int64_t>(target_))
                return false;
            if (budget_.exhausted.load(std::memory_order_relaxed) ||
                cutoff_.load(std::memory_order_relaxed) < branch_)
                return false;
            if (!budget_.spend()) return false;
            if (counter.try_add(x)) {
                if (dfs(counter, x + 1)) return true;
                counter.pop();
            }
        }
        return false;
    }

    const FindSpec& spec_;
    std::size_t target_;
    SharedBudget& budget_;
    const std::atomic<std::int64_t>& cutoff_;
    std::int64_t branch_;
};

/// Lexicographically first set of `target` elements containing spec.first.
/// Work is shared across threads by the second element; the smallest
/// successful second element wins, so the answer is schedule-independent.
FindOutcome find_first(const FindSpec& spec, std::size_t target, SharedBudget& budget, unsigned threads)
{
    SumCounter base(spec.g, spec.sum_span, spec.modulus);
    if (!base.try_add(spec.first)) return {FindStatus::infeasible, {}};
    if (target <= 1) return {FindStatus::found, base.elements()};

    constexpr std::int64_t none = std::numeric_limits<std::int64_t>::max();
    std::atomic<std::int64_t> winner{none};
    std::atomic<std::int64_t> next_branch{spec.first + 1};
    std::mutex mu;
    std::vector<std::int64_t> best;

    auto worker = [&]() {
        for (;;) {
            std::int64_t x2 = next_branch.fetch_add(1);
            if (x2 > spec.last || x2 > winner.load() || budget.exhausted.load()) return;
            if (1 + spec.remaining_bound(x2) < static_cast<std::int64_t>(target)) return;
            if (!budget.spend()) return;
            SumCounter counter = base;
            if (!counter.try_add(x2)) continue;
            Finder finder(spec, target, budget, winner, x2);
            if (finder.run(counter, x2 + 1)) {
                std::lock_guard lock(mu);
                if (x2 < winner.load()) {
                    winner.store(x2);
                    best = counter.elements();
                }
                return;
            }
        }
    };

    unsigned n_threads = std::max(1u, threads);
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    }
    if (winner.load() != none) return {FindStatus::found, best};
    if (budget.exhausted.load()) return {FindStatus::exhausted, {}};
    return {FindStatus::infeasible, {}};
}

double elapsed_since(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::int64_t isqrt_floor(std::int64_t v)
{
    auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(v)));
    while (r * r > v) --r;
    while ((r + 1) * (r + 1) <= v) ++r;
    return r;
}

}  // namespace

SearchResult search_R(std::int64_t g, std::int64_t n, const SearchConfig& config)
{
    if (g < 1 || n < 1) throw std::invalid_argument("search_R: need g >= 1 and n >= 1");
    auto start = std::chrono::steady_clock::now();
    SharedBudget budget;
    budget.limit = config.budget;

    // table[L] = R(g, L), filled for increasing L. A B*[g] set inside a window
    // of length L has at most table[L] elements, and every set has at most
    // floor(sqrt(g (2L - 1))) elements because only 2L - 1 sums are available.
    std::vector<std::int64_t> table(static_cast<std::size_t>(n) + 1, 0);
    auto ceiling = [g](std::int64_t len) { return std::min(len, isqrt_floor(g * (2 * len - 1))); };
    table[1] = 1;
    std::vector<std::int64_t> witness{1};
    std::int64_t exact_upto = 1;
    bool exact = true;

    auto spec_for = [&](std::int64_t len) {
        FindSpec spec{g, 1, len, std::nullopt, 2 * len + 1, {}};
        spec.remaining_bound = [&table, len](std::int64_t x) {
            std::int64_t window = len - x + 1;
            return window <= 0 ? std::int64_t{0} : table[static_cast<std::size_t>(window)];
        };
        return spec;
    };

    for (std::int64_t len = 2; len <= n; ++len) {
        std::int64_t target = table[len - 1] + 1;
        if (target > ceiling(len)) {
            table[len] = table[len - 1];
            exact_upto = len;
            continue;
        }
        auto spec = spec_for(len);
        auto outcome = find_first(spec, static_cast<std::size_t>(target), budget, config.threads);
        if (outcome.status == FindStatus::exhausted) {
            exact = false;
            break;
        }
        if (outcome.status == FindStatus::found) {
            table[len] = target;
            witness = outcome.elements;
        } else {
            table[len] = table[len - 1];
        }
        exact_upto = len;
    }

    SearchResult result;
    if (exact) {
        // Lexicographically first maximal set in {1..n}.
        auto spec = spec_for(n);
        auto outcome = find_first(spec, static_cast<std::size_t>(table[n]), budget, config.threads);
        if (outcome.status == FindStatus::found) witness = outcome.elements;
        result.size = table[n];
    } else {
        result.size = table[exact_upto];
    }
    result.witness = make_bstar_set(witness, n);
    result.exact = exact;
    result.nodes = budget.nodes.load();
    result.seconds = elapsed_since(start);
    return result;
}

SearchResult search_C(std::int64_t g, std::int64_t n, const SearchConfig& config)
{
    if (g < 1 || n < 1) throw std::invalid_argument("search_C: need g >= 1 and n >= 1");
    auto start = std::chrono::steady_clock::now();
    SharedBudget budget;
    budget.limit = config.budget;

    FindSpec spec{g, 0, n - 1, n, n, {}};
    spec.remaining_bound = [n](std::int64_t x) { return n - x; };
    // Every residue is hit at most g times by the |S|^2 ordered pairs.
    std::int64_t ceiling = std::min(n, isqrt_floor(g * n));

    std::vector<std::int64_t> witness{0};
    std::int64_t size = 1;
    bool exact = true;
    for (std::int64_t target = 2; target <= ceiling; ++target) {
        auto outcome = find_first(spec, static_cast<std::size_t>(target), budget, config.threads);
        if (outcome.status == FindStatus::exhausted) {
            exact = false;
            break;
        }
        if (outcome.status == FindStatus::infeasible) break;
        witness = outcome.elements;
        size = target;
    }

    SearchResult result;
    result.size = size;
    result.witness = make_bstar_set(witness, n, n);
    result.exact = exact;
    result.nodes = budget.nodes.load();
    result.seconds = elapsed_since(start);
    return result;
}

RandomProfile modular_profile(double eps, std::int64_t n)
{
    if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("modular construction: eps must lie in (0,1]");
    if (n < 1 || n % 2 == 0) throw std::invalid_argument("modular construction: n must be a positive odd integer");
    RandomProfile p;
    double nd = static_cast<double>(n);
    p.probabilities.assign(static_cast<std::size_t>(n), eps);
    p.expected_size = eps * nd;
    p.size_radius = std::sqrt(eps * nd * std::log(4.0));
    p.expected_rep = (nd - 1.0) * eps * eps + eps;
    p.rep_radius = std::sqrt(3.0 * p.expected_rep * std::log(2.0 * nd));
    p.min_size = p.expected_size - p.size_radius;
    p.max_rep = p.expected_rep + p.rep_radius;
    p.guarantee_applies = p.rep_radius < p.expected_rep / 3.0;
    return p;
}

RandomProfile integer_profile(double gamma, std::int64_t n)
{
    if (!(gamma >= std::numbers::pi)) throw std::invalid_argument("integer construction: gamma must be >= pi");
    if (!(static_cast<double>(n) >= gamma)) throw std::invalid_argument("integer construction: n must be >= gamma");
    RandomProfile p;
    double nd = static_cast<double>(n);
    p.probabilities.resize(static_cast<std::size_t>(n));
    double total = 0.0;
    for (std::int64_t k = 1; k <= n; ++k) {
        double kd = static_cast<double>(k);
        double pk = kd < gamma / std::numbers::pi ? 1.0 : std::sqrt(gamma / (std::numbers::pi * kd));
        pk = std::min(pk, 1.0);
        p.probabilities[static_cast<std::size_t>(k - 1)] = pk;
        total += pk;
    }
    p.expected_size = total;
    p.size_radius = std::sqrt(2.0 * total * std::log(3.0));
    p.expected_rep = gamma + 1.0;
    p.rep_radius = std::sqrt(3.0 * (gamma + 1.0) * std::log(3.0 * nd));
    p.min_size = p.expected_size - p.size_radius;
    p.max_rep = gamma + 1.0 + p.rep_radius;
    p.guarantee_applies = p.rep_radius < p.expected_rep / 3.0;
    return p;
}

namespace {

struct DrawStats {
    int too_small = 0;
    int too_crowded = 0;
    std::int64_t smallest_g = std::numeric_limits<std::int64_t>::max();
};

template <class Draw>
RandomResult retry_draws(const RandomProfile& profile, const RandomConfig& config, std::int64_t n,
                         std::optional<std::int64_t> modulus, Draw draw, const char* name)
{
    if (config.retry_cap < 1) throw std::invalid_argument("retry cap must be positive");
    if (config.require_guarantee && !profile.guarantee_applies)
        throw std::invalid_argument(std::string(name) + ": parameters outside the a < E/3 regime");
    DrawStats stats;
    for (int attempt = 1; attempt <= config.retry_cap; ++attempt) {
        SplitMix64 rng(stream_seed(config.seed, static_cast<std::uint64_t>(attempt)));
        std::vector<std::int64_t> elements = draw(rng);
        if (static_cast<double>(elements.size()) < profile.min_size) {
            ++stats.too_small;
            continue;
        }
        std::int64_t g = max_rep(elements, modulus);
        stats.smallest_g = std::min(stats.smallest_g, g);
        if (static_cast<double>(g) > profile.max_rep) {
            ++stats.too_crowded;
            continue;
        }
        RandomResult result;
        result.set = make_bstar_set(std::move(elements), n, modulus);
        result.profile = profile;
        result.seed = config.seed;
        result.attempts = attempt;
        return result;
    }
    std::ostringstream msg;
    msg << name << ": no acceptable draw in " << config.retry_cap << " attempts (seed " << config.seed
        << "; " << stats.too_small << " below size " << profile.min_size << ", " << stats.too_crowded
        << " with g above " << profile.max_rep;
    if (stats.smallest_g != std::numeric_limits<std::int64_t>::max()) msg << ", smallest g seen " << stats.smallest_g;
    msg << ")";
    throw ComputationError(msg.str());
}

}  // namespace

RandomResult random_modular(double eps, std::int64_t n, const RandomConfig& config)
{
    RandomProfile profile = modular_profile(eps, n);
    if (eps == 1.0) profile.guarantee_applies = true;  // deterministic draw
    auto draw = [&](SplitMix64& rng) {
        std::vector<std::int64_t> out;
        for (std::int64_t i = 1; i <= n; ++i)
            if (rng.bernoulli(eps)) out.push_back(i % n);
        std::sort(out.begin(), out.end());
        return out;
    };
    return retry_draws(profile, config, n, n, draw, "random_modular");
}

RandomResult random_integer(double gamma, std::int64_t n, const RandomConfig& config)
{
    RandomProfile profile = integer_profile(gamma, n);
    auto draw = [&](SplitMix64& rng) {
        std::vector<std::int64_t> out;
        for (std::int64_t k = 1; k <= n; ++k)
            if (rng.bernoulli(profile.probabilities[static_cast<std::size_t>(k - 1)])) out.push_back(k);
        return out;
    };
    return retry_draws(profile, config, n, std::nullopt, draw, "random_integer");
}

}  // namespace symmetra
