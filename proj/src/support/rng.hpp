#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace pdmpstop {

// Identity of a reproducible random stream: (master_seed, purpose_tag, index),
// hashed into the generator state. Identical identities replay bit-exactly;
// distinct purposes and indices give statistically independent streams.
struct RngStream {
    std::uint64_t master_seed = 0;
    std::string purpose;
    std::uint64_t index = 0;

    RngStream() = default;
    RngStream(std::uint64_t seed, std::string_view tag, std::uint64_t idx = 0)
        : master_seed(seed), purpose(tag), index(idx) {}

    RngStream with_index(std::uint64_t idx) const { return RngStream(master_seed, purpose, idx); }
    RngStream sub(std::string_view tag, std::uint64_t idx = 0) const {
        RngStream s(master_seed, purpose, index);
        s.purpose += '/';
        s.purpose += tag;
        s.index = idx;
        return s;
    }
};

// Deterministic generator over an RngStream. mt19937_64's output sequence is
// pinned by the standard, and the uniform/exponential draws below avoid
// std::*_distribution (whose algorithms are implementation-defined), so
// streams replay bit-exactly across platforms.
class Rng {
public:
    explicit Rng(const RngStream& stream);

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0,1) with 53-bit resolution.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform on (0,1], safe as a log argument.
    double uniform_pos() { return 1.0 - uniform(); }

    // Unit-exponential variate.
    double exponential();

private:
    std::mt19937_64 engine_;
};

}  // namespace pdmpstop
