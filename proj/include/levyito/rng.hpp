#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <string_view>

namespace levyito
{
//---------------------------------------------------------------------------//
/*!
 * Philox4x32-10 counter-based generator.
 *
 * The 64-bit key selects an independent stream family and the upper half of
 * the 128-bit counter selects a stream within it; the lower half counts
 * blocks. Any (key, stream) pair yields the same sequence regardless of which
 * thread draws it, which is what makes the Monte Carlo loops reproducible
 * under any worker count.
 *
 * Satisfies UniformRandomBitGenerator so it plugs into <random>.
 */
class Philox4x32
{
  public:
    using result_type = std::uint32_t;
    using Block = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    Philox4x32(std::uint64_t key, std::uint64_t stream = 0) noexcept
        : key_{static_cast<std::uint32_t>(key),
               static_cast<std::uint32_t>(key >> 32)}
        , stream_(stream)
    {
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept
    {
        return std::numeric_limits<result_type>::max();
    }

    result_type operator()() noexcept
    {
        if (used_ == 4)
        {
            buffer_ = generate(counter_block(block_++), key_);
            used_ = 0;
        }
        return buffer_[used_++];
    }

    //! Raw 10-round bijection, exposed for known-answer tests.
    static Block generate(Block ctr, Key key) noexcept
    {
        for (int round = 0; round < 10; ++round)
        {
            if (round > 0)
            {
                key[0] += kW0;
                key[1] += kW1;
            }
            ctr = single_round(ctr, key);
        }
        return ctr;
    }

  private:
    static constexpr std::uint32_t kM0 = 0xD2511F53u;
    static constexpr std::uint32_t kM1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kW0 = 0x9E3779B9u;
    static constexpr std::uint32_t kW1 = 0xBB67AE85u;

    static Block single_round(Block const& ctr, Key const& key) noexcept
    {
        std::uint64_t const p0 = std::uint64_t{kM0} * ctr[0];
        std::uint64_t const p1 = std::uint64_t{kM1} * ctr[2];
        auto const hi0 = static_cast<std::uint32_t>(p0 >> 32);
        auto const lo0 = static_cast<std::uint32_t>(p0);
        auto const hi1 = static_cast<std::uint32_t>(p1 >> 32);
        auto const lo1 = static_cast<std::uint32_t>(p1);
        return {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }

    Block counter_block(std::uint64_t block) const noexcept
    {
        return {static_cast<std::uint32_t>(block),
                static_cast<std::uint32_t>(block >> 32),
                static_cast<std::uint32_t>(stream_),
                static_cast<std::uint32_t>(stream_ >> 32)};
    }

    Key key_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    Block buffer_{};
    int used_ = 4;
};

//! Hash (seed, a, b) into a fresh 64-bit seed with one Philox block.
inline std::uint64_t
derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) noexcept
{
    auto const out = Philox4x32::generate(
        {static_cast<std::uint32_t>(b),
         static_cast<std::uint32_t>(b >> 32),
         static_cast<std::uint32_t>(a),
         static_cast<std::uint32_t>(a >> 32)},
        {static_cast<std::uint32_t>(seed),
         static_cast<std::uint32_t>(seed >> 32)});
    return std::uint64_t{out[0]} | (std::uint64_t{out[1]} << 32);
}

//! Seed of the j-th Monte Carlo sample drawn under a check-level seed.
inline std::uint64_t sample_seed(std::uint64_t check_seed, std::uint64_t j) noexcept
{
    return derive_seed(check_seed, 0, j);
}

//! FNV-1a; stable tag for deriving per-check seeds from check names.
constexpr std::uint64_t fnv1a(std::string_view text) noexcept
{
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (char c : text)
    {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ull;
    }
    return h;
}

}  // namespace levyito
