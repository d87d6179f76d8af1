#ifndef SEPVOL_FAURE_HPP
#define SEPVOL_FAURE_HPP

// Generalized Faure sequences in the smallest prime base >= dimension.
// Coordinate c applies the c-th power of the Pascal matrix (mod base) to
// the base-p digits of the index; coordinate 0 is the plain radical
// inverse. The scrambled variant left-multiplies each generator matrix by
// a seeded nonsingular upper-triangular matrix mod base. A replayable
// splitmix-based uniform stream is provided as the non-QMC fallback.
// Every point is a pure function of (spec, index): streams can be
// partitioned into disjoint index ranges and replayed bit-for-bit.

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sepvol {

enum class SeqKind { faure, scrambled_faure, uniform_prng };

inline const char* seq_kind_name(SeqKind k) {
    switch (k) {
    case SeqKind::faure: return "faure";
    case SeqKind::scrambled_faure: return "scrambled-faure";
    default: return "uniform-prng";
    }
}

inline SeqKind seq_kind_from_name(const std::string& s) {
    if (s == "faure") return SeqKind::faure;
    if (s == "scrambled-faure") return SeqKind::scrambled_faure;
    if (s == "uniform-prng") return SeqKind::uniform_prng;
    throw std::invalid_argument("unknown sequence kind '" + s + "'");
}

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline unsigned smallest_prime_at_least(unsigned n) {
    if (n <= 2) return 2;
    for (unsigned p = n | 1;; p += 2) {
        bool prime = true;
        for (unsigned q = 3; q * q <= p; q += 2)
            if (p % q == 0) { prime = false; break; }
        if (prime) return p;
    }
}

} // namespace detail

struct SequenceSpec {
    SeqKind kind = SeqKind::faure;
    unsigned dimension = 6;
    std::uint64_t seed = 1;  // scrambling / prng only
    std::uint64_t skip = 0;  // first emitted index
    unsigned base = 7;       // derived from dimension
};

// skip defaults to base^4 initial points
inline SequenceSpec make_sequence_spec(SeqKind kind, unsigned dimension,
                                       std::uint64_t seed = 1,
                                       std::int64_t skip = -1) {
    if (dimension < 1 || dimension > 16)
        throw std::invalid_argument("make_sequence_spec: dimension must be in 1..16");
    SequenceSpec s;
    s.kind = kind;
    s.dimension = dimension;
    s.seed = seed;
    s.base = detail::smallest_prime_at_least(dimension);
    if (skip < 0) {
        std::uint64_t b4 = 1;
        for (int i = 0; i < 4; ++i) b4 *= s.base;
        s.skip = b4;
    } else {
        s.skip = static_cast<std::uint64_t>(skip);
    }
    return s;
}

class PointStream {
public:
    explicit PointStream(const SequenceSpec& spec) : spec_(spec), cursor_(spec.skip) {
        if (spec_.kind != SeqKind::uniform_prng) build_generators();
    }

    const SequenceSpec& spec() const { return spec_; }
    std::uint64_t cursor() const { return cursor_; }
    void seek(std::uint64_t index) { cursor_ = index; }

    // the point with absolute index i; pure in (spec, i)
    void point_at(std::uint64_t i, std::span<double> out) const {
        if (out.size() != spec_.dimension)
            throw std::invalid_argument("point_at: output span has wrong dimension");
        if (i >= (1ULL << 63)) throw std::domain_error("point_at: index out of range");
        if (spec_.kind == SeqKind::uniform_prng) {
            const std::uint64_t h0 = detail::splitmix64(spec_.seed ^ (i * 0x9e3779b97f4a7c15ULL));
            for (unsigned c = 0; c < spec_.dimension; ++c) {
                const std::uint64_t h = detail::splitmix64(h0 + c);
                out[c] = (static_cast<double>(h >> 11) + 0.5) * 0x1p-53;
            }
            return;
        }
        const unsigned p = spec_.base;
        unsigned digits[kmax_digits];
        unsigned nd = 0;
        for (std::uint64_t n = i; n != 0; n /= p) digits[nd++] = static_cast<unsigned>(n % p);
        for (unsigned c = 0; c < spec_.dimension; ++c) {
            const std::uint8_t* g = gen_.data() + c * kmax_ * kmax_;
            double x = 0.0;
            for (unsigned k = nd; k-- > 0;) {
                std::uint32_t acc = 0;
                const std::uint8_t* row = g + k * kmax_;
                for (unsigned j = k; j < nd; ++j) acc += std::uint32_t(row[j]) * digits[j];
                x = (x + acc % p) / p;
            }
            out[c] = x;
        }
    }

    void next(std::span<double> out) {
        point_at(cursor_, out);
        ++cursor_;
    }

    std::vector<double> next_point() {
        std::vector<double> out(spec_.dimension);
        next(out);
        return out;
    }

private:
    static constexpr unsigned kmax_digits = 64;

    void build_generators() {
        const unsigned p = spec_.base;
        // digit count that can ever occur for indices below 2^63
        unsigned k = 0;
        for (long double cap = 1.0L; cap < 0x1p63 && k < kmax_digits; cap *= p) ++k;
        kmax_ = k;

        // Pascal triangle mod p
        std::vector<std::uint8_t> binom(kmax_ * kmax_, 0);
        for (unsigned j = 0; j < kmax_; ++j) {
            binom[j * kmax_] = 1;
            for (unsigned m = 1; m <= j; ++m)
                binom[j * kmax_ + m] =
                    static_cast<std::uint8_t>((binom[(j - 1) * kmax_ + m - 1] +
                                               (m <= j - 1 ? binom[(j - 1) * kmax_ + m] : 0)) % p);
        }

        gen_.assign(std::size_t(spec_.dimension) * kmax_ * kmax_, 0);
        for (unsigned c = 0; c < spec_.dimension; ++c) {
            std::uint8_t* m = gen_.data() + std::size_t(c) * kmax_ * kmax_;
            // M[k][j] = C(j, k) c^(j-k) mod p, upper triangular
            for (unsigned kk = 0; kk < kmax_; ++kk) {
                unsigned cpow = 1;
                for (unsigned j = kk; j < kmax_; ++j) {
                    m[kk * kmax_ + j] =
                        static_cast<std::uint8_t>((binom[j * kmax_ + kk] * cpow) % p);
                    cpow = (cpow * c) % p;
                }
            }
        }
        if (spec_.kind == SeqKind::scrambled_faure) apply_scrambling();
    }

    void apply_scrambling() {
        const unsigned p = spec_.base;
        std::vector<std::uint8_t> u(kmax_ * kmax_), prod(kmax_ * kmax_);
        for (unsigned c = 0; c < spec_.dimension; ++c) {
            std::mt19937_64 rng(detail::splitmix64(spec_.seed) ^
                                detail::splitmix64(0xface5000ULL + c));
            std::uniform_int_distribution<unsigned> unit(1, p - 1), any(0, p - 1);
            std::fill(u.begin(), u.end(), 0);
            for (unsigned r = 0; r < kmax_; ++r) {
                u[r * kmax_ + r] = static_cast<std::uint8_t>(unit(rng));
                for (unsigned j = r + 1; j < kmax_; ++j)
                    u[r * kmax_ + j] = static_cast<std::uint8_t>(any(rng));
            }
            std::uint8_t* m = gen_.data() + std::size_t(c) * kmax_ * kmax_;
            std::fill(prod.begin(), prod.end(), 0);
            for (unsigned r = 0; r < kmax_; ++r)
                for (unsigned j = r; j < kmax_; ++j) {
                    std::uint32_t acc = 0;
                    for (unsigned t = r; t <= j; ++t)
                        acc += std::uint32_t(u[r * kmax_ + t]) * m[t * kmax_ + j];
                    prod[r * kmax_ + j] = static_cast<std::uint8_t>(acc % p);
                }
            std::copy(prod.begin(), prod.end(), m);
        }
    }

    SequenceSpec spec_;
    std::uint64_t cursor_;
    unsigned kmax_ = 0;
    std::vector<std::uint8_t> gen_; // dimension generator matrices, row-major
};

struct IndexRange {
    std::uint64_t begin = 0, end = 0; // half-open
    std::uint64_t size() const { return end - begin; }
    bool operator==(const IndexRange&) const = default;
};

// contiguous, disjoint, balanced ranges covering [skip, skip + total)
inline std::vector<IndexRange> partition(const SequenceSpec& spec, unsigned workers,
                                         std::uint64_t total) {
    if (workers < 1) throw std::invalid_argument("partition: workers must be >= 1");
    if (total >= (1ULL << 63) || spec.skip + total < spec.skip)
        throw std::domain_error("partition: index range overflows");
    std::vector<IndexRange> out;
    out.reserve(workers);
    const std::uint64_t base_len = total / workers, extra = total % workers;
    std::uint64_t at = spec.skip;
    for (unsigned w = 0; w < workers; ++w) {
        const std::uint64_t len = base_len + (w < extra ? 1 : 0);
        out.push_back({at, at + len});
        at += len;
    }
    return out;
}

inline std::vector<IndexRange> partition(const PointStream& stream, unsigned workers,
                                         std::uint64_t total) {
    return partition(stream.spec(), workers, total);
}

} // namespace sepvol

#endif
