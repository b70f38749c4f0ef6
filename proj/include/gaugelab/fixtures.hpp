#pragma once

// Committed oracle values consumed by the scenario fixture-match claims.
// This file is GENERATED by tools/make_fixtures and must only change through
// a deliberate rerun of that tool (see README, "Fixtures"); the build never
// rewrites it.

#include <array>
#include <cstdint>

namespace gaugelab::fixtures {

// dense diagonalization of the softened-Coulomb box Hamiltonian
struct SoftCoulombFixture {
    int n;
    double length, kappa, soft, q, m;
    std::array<double, 3> lowest;
};
inline constexpr SoftCoulombFixture kSoftCoulombBox{
    1024, 40.0, 1.0, 0.5, 1.0, 1.0,
    {-1.1762553422154172, -0.35716664006668924,
     -0.18600080046457751}};

// propagator covariance deviation at the default scenario parameters
struct CovarianceFixture {
    int nx, ny, steps;
    double length, dt;
    std::uint64_t chi_seed;
    double deviation;
};
inline constexpr CovarianceFixture kSchrodingerCovariance{64, 64, 100, 10.0, 0.00050000000000000001, 12,
                                                         2.3618637150576473e-08};
inline constexpr CovarianceFixture kDiracCovariance{512, 1, 100, 10.0, 0.00050000000000000001, 12,
                                                    1.6561739580057612e-09};

// dense uniform-field spectrum in the symmetric gauge, plus its near-degenerate
// clustering at the recorded gap tolerance
struct LandauFixture {
    int n;
    double length, b, q, m;
    std::array<double, 6> lowest;
    std::array<int, 6> cluster_sizes;  // leading entries; -1 marks unused slots
    double cluster_tol;
};
inline constexpr LandauFixture kLandauPair{
    40, 12.0, 1.0, 1.0, 1.0,
    {0.49466475947809563, 0.4946651351895866, 0.49466831178742421, 0.49468630104501649, 0.49476281114505838, 0.49502282224971861},
    {2, 1, 1, 1, 1, -1},
    9.9999999999999995e-07};

}  // namespace gaugelab::fixtures
