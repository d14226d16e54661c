// Prime generation and dyadic log-bands.
//
// A band (r, k) with -1 <= r <= k holds the primes p with
// 2^r < log p <= 2^k, together with log p and p^{-1/2} precomputed once
// at full precision.  The band scale 2^{2k} - 2^{2r} drives every tail
// exponent downstream.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

namespace zrf {

struct PrimeEntry {
    std::uint64_t p;
    double log_p;       // ln p
    double inv_sqrt_p;  // p^{-1/2}
};

class PrimeBand {
public:
    PrimeBand(int r, int k, std::vector<PrimeEntry> entries);

    int r() const { return r_; }
    int k() const { return k_; }
    // 2^{2k} - 2^{2r}; zero iff r == k.
    double scale() const { return scale_; }
    const std::vector<PrimeEntry>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

private:
    int r_;
    int k_;
    double scale_;
    std::vector<PrimeEntry> entries_;
};

// Largest sieve limit accepted by default.
inline constexpr std::uint64_t kSieveCeiling = 1'000'000'000ULL;

// All primes <= limit in increasing order.  Segmented Eratosthenes with
// odd-only storage.  Throws argument_error for limit < 2 and
// resource_error past kSieveCeiling.
std::vector<std::uint64_t> sieve_primes(std::uint64_t limit);

// Like sieve_primes, but consults/updates a binary prime cache in
// `cache_dir` when given (file keyed by limit: 8-byte little-endian count
// followed by the primes as 8-byte little-endian words).
std::vector<std::uint64_t> sieve_primes_cached(
    std::uint64_t limit, const std::optional<std::filesystem::path>& cache_dir);

std::filesystem::path prime_cache_file(const std::filesystem::path& dir,
                                       std::uint64_t limit);
void write_prime_cache(const std::filesystem::path& file,
                       std::span<const std::uint64_t> primes);
std::optional<std::vector<std::uint64_t>> read_prime_cache(
    const std::filesystem::path& file);

// Band of primes with 2^r < log p <= 2^k.  Requires -1 <= r <= k and
// e^{2^k} within the sieve ceiling (r == k is exempt: the band is empty).
PrimeBand build_band(int r, int k,
                     const std::optional<std::filesystem::path>& cache_dir = {});

// Band scale 2^{2k} - 2^{2r} without touching any primes.
double band_scale(int r, int k);

// sum_{P < p <= Q} (log p)^m / p by direct summation, ascending, compensated.
double prime_log_power_sum(double P, double Q, unsigned m,
                           const std::optional<std::filesystem::path>& cache_dir = {});
// Same, over a caller-supplied ascending prime list covering (P, Q].
double prime_log_power_sum(std::span<const std::uint64_t> primes, double P,
                           double Q, unsigned m);

// prime_log_power_sum(P, Q, m) - ((log Q)^m - (log P)^m) / m.
// Bounded uniformly in P, Q for fixed m.
double lemma_a1_residual(double P, double Q, unsigned m,
                         const std::optional<std::filesystem::path>& cache_dir = {});
double lemma_a1_residual(std::span<const std::uint64_t> primes, double P,
                         double Q, unsigned m);

}  // namespace zrf
