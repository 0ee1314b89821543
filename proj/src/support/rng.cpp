#include "support/rng.hpp"

#include <cmath>

namespace pdmpstop {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace

Rng::Rng(const RngStream& stream) {
    std::uint64_t state = stream.master_seed;
    std::uint64_t a = splitmix64(state);
    state ^= fnv1a(stream.purpose);
    std::uint64_t b = splitmix64(state);
    state ^= stream.index * 0xd1342543de82ef95ULL + 1;
    std::uint64_t c = splitmix64(state);
    std::seed_seq seq{static_cast<unsigned>(a), static_cast<unsigned>(a >> 32),
                      static_cast<unsigned>(b), static_cast<unsigned>(b >> 32),
                      static_cast<unsigned>(c), static_cast<unsigned>(c >> 32)};
    engine_.seed(seq);
}

double Rng::exponential() { return -std::log(uniform_pos()); }

}  // namespace pdmpstop
