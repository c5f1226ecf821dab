#pragma once

#include <array>
#include <cstdint>

namespace sabr_ldp {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
struct Philox4x32 {
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;
    static Counter block(Counter ctr, Key key);
};

/// Standard normals for one Monte Carlo path.  Draw k of path p under seed s is a
/// pure function of (s, p, k), so paths can be generated in any order.
class NormalStream {
public:
    NormalStream(std::uint64_t seed, std::uint64_t path);

    double next();
    /// Uniform on the open interval (0, 1) with 53 random bits.
    double uniform();

private:
    Philox4x32::Counter counter_;
    Philox4x32::Key key_;
    Philox4x32::Counter buf_{};
    int buf_pos_ = 4;
    bool has_spare_ = false;
    double spare_ = 0.0;

    std::uint64_t next_u64();
};

}  // namespace sabr_ldp
