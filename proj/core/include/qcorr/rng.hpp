#pragma once

#include <complex>
#include <cstdint>

namespace qcorr {

// Splitmix64-based generator with value semantics. Gaussian variates come
// from Box-Muller on explicitly constructed uniforms, so streams are
// bit-reproducible across platforms and compilers.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64();
    double next_double();  // uniform in [0, 1)
    double next_gaussian();
    std::complex<double> next_complex_gaussian();

    // Derives an independent generator for a substream; the parent is not
    // advanced, so per-sample streams are order-independent.
    Rng substream(std::uint64_t stream) const;

  private:
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace qcorr
