#pragma once

#include <vector>

#include "bernwf/rng.hpp"

namespace bernwf {

// Binomial(n, x): pmf over {0..n} and an inversion sampler matching it.
std::vector<double> binom_pmf(int n, double x);
int binom_sample(int n, double x, Rng& rng);

// Hypergeometric(n, k, j): k marked among n, j drawn; pmf indexed by value
// in {0..min(k,j)} (zero below the support floor).
std::vector<double> hyp_pmf(int n, int k, int j);
int hyp_sample(int n, int k, int j, Rng& rng);

// Hypergeometric pairing: `total` balls with `red` of them red; `pairs`
// pairs are formed uniformly at random and the rest stay singletons. The
// observable is the number of groups containing at least one red ball.
struct HPParams {
    int total = 2;
    int pairs = 1;
    int red = 0;

    void check() const;   // throws std::invalid_argument on violation
};

// Exact pmf by enumeration over red-ball placements; only available for
// total <= 12 (throws otherwise), indexed by value in {0..total-pairs}.
std::vector<double> hp_pmf(const HPParams& params);
inline constexpr int kHpExactLimit = 12;

// Uniform shuffle + consecutive pairing; any total.
int hp_sample(const HPParams& params, Rng& rng);

// R^a_{n,ell,i} ~ HP(n+ell, ell, i): type-a group count after an
// a-branching of size ell is undone with i of n+ell leaves of type a.
int ra_sample(int n, int ell, int i, Rng& rng);
std::vector<double> ra_pmf(int n, int ell, int i);   // exact; n+ell <= 12

// R^A_{n,ell,i} ~ n - HP(n+ell, ell, n+ell-i).
int rA_sample(int n, int ell, int i, Rng& rng);
std::vector<double> rA_pmf(int n, int ell, int i);   // exact; n+ell <= 12

}  // namespace bernwf
