#pragma once

// Applications built on the temporal primitives: temporal Bernoulli bits,
// Metropolis-Hastings acceptance, exponential-clocks weighted sampling with
// current addressing, and a small Ising MH chain.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "smtj/device.hpp"
#include "smtj/rng.hpp"
#include "smtj/temporal.hpp"

namespace smtj {

// Bernoulli(p) bit from a PDC raced against a DDC with T_D = -tau ln(1-p).
// Returns true iff the probabilistic edge passes the inhibit gate.
// Requires 0 <= p < 1; p = 1 would need an infinite delay.
bool temporal_bernoulli(double p, double tau_s, RandomStream& rng);

// Metropolis-Hastings acceptance bit: true with probability
// min(1, exp(-beta * delta_e)). Built from an Exp(w*beta) probabilistic edge
// inhibited by a deterministic edge at max(0, delta_e / w); the inhibit
// output is inverted, so a blocked stochastic edge means acceptance.
bool mh_accept(double delta_e, double beta, double w, RandomStream& rng);

// Analytic acceptance probability, for detailed-balance checks.
double mh_accept_probability(double delta_e, double beta);

struct WeightedDie {
    std::vector<double> rates;  // lambda_j > 0, per second

    void validate() const;
    // P_j = lambda_j / sum(lambda); sums to 1.
    std::vector<double> probabilities() const;
};

// One draw: race one Exp(lambda_j) edge per face, return the winner index.
std::size_t weighted_sample(const WeightedDie& die, RandomStream& rng);

// Die addressed by per-face currents: lambda_j from the switching law.
// Currents must lie within the device operating range.
WeightedDie currents_to_rates(const std::vector<double>& currents_ua,
                              const DeviceParams& params);

struct SpinState {
    std::vector<int8_t> spins;  // +1 / -1

    std::uint64_t code() const;  // bitmask, spin i up -> bit i
    static SpinState all_up(std::size_t n);
    static SpinState from_code(std::uint64_t code, std::size_t n);
};

struct IsingProblem {
    std::size_t n_spins = 0;
    std::vector<std::vector<double>> coupling;  // symmetric, zero diagonal
    std::vector<double> field;
    double beta = 1.0;
    double w = 1.0;  // power scale of the temporal embedding; cancels in probabilities

    void validate() const;
    double energy(const SpinState& s) const;
    // Energy change of flipping spin i: 2 s_i (sum_j J_ij s_j + h_i).
    double delta_energy(const SpinState& s, std::size_t i) const;

    static IsingProblem ferromagnet_grid(std::size_t rows, std::size_t cols, double j,
                                         double h, double beta, double w = 1.0);
    static IsingProblem random_couplings(std::size_t n, double j_scale, double h_scale,
                                         double beta, std::uint64_t seed, double w = 1.0);
};

// Serial single-spin-flip Metropolis chain; returns the visited states
// (n_steps entries, one per proposal, accepted or not).
std::vector<SpinState> ising_mh_chain(const IsingProblem& problem, const SpinState& initial,
                                      std::size_t n_steps, RandomStream& rng);

// Memory-light variant: histogram of state codes visited after burn_in.
std::vector<std::uint64_t> ising_mh_histogram(const IsingProblem& problem,
                                              const SpinState& initial, std::size_t n_steps,
                                              std::size_t burn_in, RandomStream& rng);

// Exact Boltzmann distribution by enumeration of all 2^n states (n <= 20).
std::vector<double> enumerate_boltzmann(const IsingProblem& problem);

} // namespace smtj
