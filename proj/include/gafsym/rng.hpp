#ifndef GAFSYM_RNG_HPP
#define GAFSYM_RNG_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace gafsym
{

// Reproducible random stream addressed by (seed, stream_id). Distinct ids give
// statistically independent streams; the same pair always replays the same
// draws.
class RngStream
{
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id) : m_seed(seed), m_stream(stream_id)
    {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(stream_id), static_cast<std::uint32_t>(stream_id >> 32),
                          0x67616673u};
        m_engine.seed(seq);
    }

    std::uint64_t seed() const
    {
        return m_seed;
    }

    std::uint64_t stream_id() const
    {
        return m_stream;
    }

    // A child stream; used to hand independent streams to sub-tasks.
    RngStream split(std::uint64_t child) const
    {
        return RngStream(m_seed ^ (0x9e3779b97f4a7c15ULL * (m_stream + 1)), child);
    }

    // Uniform on [0, 1).
    double uniform()
    {
        return std::generate_canonical<double, 53>(m_engine);
    }

    double normal()
    {
        return m_normal(m_engine);
    }

    // Standard complex Gaussian: independent real and imaginary parts of
    // variance 1/2 each, so E|g|^2 = 1.
    std::complex<double> complex_gaussian()
    {
        const double re = m_normal(m_engine);
        const double im = m_normal(m_engine);
        return {re * M_SQRT1_2, im * M_SQRT1_2};
    }

    std::uint64_t next_u64()
    {
        return m_engine();
    }

    // Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n)
    {
        return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(m_engine);
    }

    std::mt19937_64 &engine()
    {
        return m_engine;
    }

private:
    std::uint64_t m_seed;
    std::uint64_t m_stream;
    std::mt19937_64 m_engine;
    std::normal_distribution<double> m_normal{0.0, 1.0};
};

} // namespace gafsym

#endif
