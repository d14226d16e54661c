#include "zrf/primes.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>

#include "zrf/errors.hpp"
#include "zrf/sum.hpp"

namespace zrf {

namespace {

constexpr std::size_t kSegmentOdds = 1u << 20;  // odds per segment (~1 MiB)

// Odd-only simple sieve used for the base primes up to sqrt(limit).
std::vector<std::uint64_t> small_primes(std::uint64_t limit) {
    std::vector<std::uint64_t> out;
    if (limit < 2) return out;
    out.push_back(2);
    if (limit < 3) return out;
    const std::size_t n_odds = static_cast<std::size_t>((limit - 1) / 2);  // 3,5,...
    std::vector<char> is_prime(n_odds + 1, 1);
    for (std::size_t i = 0; ; ++i) {
        const std::uint64_t p = 2 * i + 3;
        if (p * p > limit) break;
        if (!is_prime[i]) continue;
        for (std::uint64_t q = p * p; q <= limit; q += 2 * p) {
            is_prime[(q - 3) / 2] = 0;
        }
    }
    for (std::size_t i = 0; i < n_odds; ++i) {
        if (is_prime[i]) out.push_back(2 * i + 3);
    }
    return out;
}

}  // namespace

std::vector<std::uint64_t> sieve_primes(std::uint64_t limit) {
    if (limit < 2) {
        throw argument_error("sieve limit must be >= 2, got " + std::to_string(limit));
    }
    if (limit > kSieveCeiling) {
        throw resource_error("sieve limit " + std::to_string(limit) +
                             " exceeds ceiling " + std::to_string(kSieveCeiling));
    }

    const auto sqrt_limit =
        static_cast<std::uint64_t>(std::sqrt(static_cast<double>(limit))) + 1;
    const std::vector<std::uint64_t> base = small_primes(sqrt_limit);

    std::vector<std::uint64_t> primes;
    primes.reserve(static_cast<std::size_t>(
        limit > 16 ? 1.2 * static_cast<double>(limit) / std::log(static_cast<double>(limit))
                   : 8));
    primes.push_back(2);

    std::vector<char> sieve(kSegmentOdds);
    // Segments cover the odd numbers in [low, low + 2*kSegmentOdds).
    for (std::uint64_t low = 3; low <= limit; low += 2 * kSegmentOdds) {
        const std::uint64_t high = std::min(low + 2 * kSegmentOdds - 1, limit);
        std::fill(sieve.begin(), sieve.end(), 1);
        for (const std::uint64_t p : base) {
            if (p == 2) continue;
            if (p * p > high) break;
            std::uint64_t q = std::max(p * p, ((low + p - 1) / p) * p);
            if (q % 2 == 0) q += p;  // odd multiples only
            for (; q <= high; q += 2 * p) {
                sieve[(q - low) / 2] = 0;
            }
        }
        for (std::uint64_t n = low; n <= high; n += 2) {
            if (sieve[(n - low) / 2]) primes.push_back(n);
        }
    }
    return primes;
}

std::filesystem::path prime_cache_file(const std::filesystem::path& dir,
                                       std::uint64_t limit) {
    return dir / ("primes_" + std::to_string(limit) + ".bin");
}

namespace {

void put_u64_le(std::string& buf, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint64_t get_u64_le(const unsigned char* p) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
    return v;
}

}  // namespace

void write_prime_cache(const std::filesystem::path& file,
                       std::span<const std::uint64_t> primes) {
    std::string buf;
    buf.reserve(8 * (primes.size() + 1));
    put_u64_le(buf, primes.size());
    for (const std::uint64_t p : primes) put_u64_le(buf, p);

    const std::filesystem::path tmp = file.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw resource_error("cannot write prime cache " + tmp.string());
        out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
        if (!out) throw resource_error("short write to prime cache " + tmp.string());
    }
    std::filesystem::rename(tmp, file);
}

std::optional<std::vector<std::uint64_t>> read_prime_cache(
    const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) return std::nullopt;
    std::string buf((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
    if (buf.size() < 8) return std::nullopt;
    const auto* data = reinterpret_cast<const unsigned char*>(buf.data());
    const std::uint64_t count = get_u64_le(data);
    if (buf.size() != 8 * (count + 1)) return std::nullopt;
    std::vector<std::uint64_t> primes(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        primes[i] = get_u64_le(data + 8 * (i + 1));
    }
    return primes;
}

std::vector<std::uint64_t> sieve_primes_cached(
    std::uint64_t limit, const std::optional<std::filesystem::path>& cache_dir) {
    if (!cache_dir) return sieve_primes(limit);
    const std::filesystem::path file = prime_cache_file(*cache_dir, limit);
    if (auto cached = read_prime_cache(file)) return std::move(*cached);
    std::vector<std::uint64_t> primes = sieve_primes(limit);
    std::error_code ec;
    std::filesystem::create_directories(*cache_dir, ec);
    write_prime_cache(file, primes);
    return primes;
}

PrimeBand::PrimeBand(int r, int k, std::vector<PrimeEntry> entries)
    : r_(r), k_(k), scale_(band_scale(r, k)), entries_(std::move(entries)) {}

double band_scale(int r, int k) {
    return std::exp2(2.0 * k) - std::exp2(2.0 * r);
}

PrimeBand build_band(int r, int k,
                     const std::optional<std::filesystem::path>& cache_dir) {
    if (r < -1 || r > k) {
        throw argument_error("band requires -1 <= r <= k, got r=" + std::to_string(r) +
                             " k=" + std::to_string(k));
    }
    const double upper_log = std::exp2(k);
    if (upper_log > std::log(static_cast<double>(kSieveCeiling))) {
        throw resource_error("band (" + std::to_string(r) + "," + std::to_string(k) +
                             ") needs primes up to e^(2^" + std::to_string(k) +
                             "), past the sieve ceiling " + std::to_string(kSieveCeiling));
    }
    if (r == k) return PrimeBand(r, k, {});

    const double lower_log = std::exp2(r);
    const auto limit = static_cast<std::uint64_t>(std::floor(std::exp(upper_log))) + 1;
    const std::vector<std::uint64_t> primes = sieve_primes_cached(limit, cache_dir);

    std::vector<PrimeEntry> entries;
    for (const std::uint64_t p : primes) {
        const double lp = std::log(static_cast<double>(p));
        // Dyadic boundary test at full precision; no prime log lands exactly
        // on 2^r or 2^k.
        if (lp > lower_log && lp <= upper_log) {
            entries.push_back({p, lp, 1.0 / std::sqrt(static_cast<double>(p))});
        }
    }
    return PrimeBand(r, k, std::move(entries));
}

double prime_log_power_sum(std::span<const std::uint64_t> primes, double P,
                           double Q, unsigned m) {
    if (m < 1) throw argument_error("prime log power sum requires m >= 1");
    if (!(P >= 1.0)) throw argument_error("prime log power sum requires P >= 1");
    if (Q < P) throw argument_error("prime log power sum requires Q >= P");
    NeumaierSum acc;
    for (const std::uint64_t p : primes) {
        const auto pd = static_cast<double>(p);
        if (pd <= P) continue;
        if (pd > Q) break;
        const double lp = std::log(pd);
        double t = lp;
        for (unsigned j = 1; j < m; ++j) t *= lp;
        acc.add(t / pd);
    }
    return acc.value();
}

double prime_log_power_sum(double P, double Q, unsigned m,
                           const std::optional<std::filesystem::path>& cache_dir) {
    if (m < 1) throw argument_error("prime log power sum requires m >= 1");
    if (!(P >= 1.0)) throw argument_error("prime log power sum requires P >= 1");
    if (Q < P) throw argument_error("prime log power sum requires Q >= P");
    if (Q > static_cast<double>(kSieveCeiling)) {
        throw resource_error("Q=" + std::to_string(Q) + " exceeds sieve ceiling " +
                             std::to_string(kSieveCeiling));
    }
    if (Q < 2.0) return 0.0;
    const auto limit = static_cast<std::uint64_t>(std::floor(Q));
    const std::vector<std::uint64_t> primes = sieve_primes_cached(limit, cache_dir);
    return prime_log_power_sum(primes, P, Q, m);
}

namespace {

double closed_form_term(double P, double Q, unsigned m) {
    const double lq = std::log(Q);
    const double lp = std::log(P);
    double tq = lq, tp = lp;
    for (unsigned j = 1; j < m; ++j) {
        tq *= lq;
        tp *= lp;
    }
    return (tq - tp) / static_cast<double>(m);
}

}  // namespace

double lemma_a1_residual(std::span<const std::uint64_t> primes, double P, double Q,
                         unsigned m) {
    return prime_log_power_sum(primes, P, Q, m) - closed_form_term(P, Q, m);
}

double lemma_a1_residual(double P, double Q, unsigned m,
                         const std::optional<std::filesystem::path>& cache_dir) {
    return prime_log_power_sum(P, Q, m, cache_dir) - closed_form_term(P, Q, m);
}

}  // namespace zrf
