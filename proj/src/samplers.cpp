#include "smtj/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace smtj {

bool temporal_bernoulli(double p, double tau_s, RandomStream& rng) {
    if (!(p >= 0.0 && p < 1.0))
        throw std::domain_error("temporal_bernoulli: p must be in [0, 1)");
    if (!(tau_s > 0.0)) throw std::invalid_argument("temporal_bernoulli: tau must be > 0");
    const EdgeEvent stochastic = pdc(0.0, 1.0 / tau_s, rng);
    const EdgeEvent blocking = ddc(0.0, -tau_s * std::log1p(-p));
    return !inhibit(stochastic, blocking).is_never();
}

bool mh_accept(double delta_e, double beta, double w, RandomStream& rng) {
    if (!(w > 0.0 && beta > 0.0)) throw std::invalid_argument("mh_accept: need w > 0, beta > 0");
    // a negative-energy move maps to a blocking edge clamped at t0
    const EdgeEvent blocking = ddc(0.0, std::max(0.0, delta_e / w));
    const EdgeEvent stochastic = pdc(0.0, w * beta, rng);
    return inhibit(stochastic, blocking).is_never();
}

double mh_accept_probability(double delta_e, double beta) {
    return std::min(1.0, std::exp(-beta * delta_e));
}

void WeightedDie::validate() const {
    if (rates.empty()) throw std::invalid_argument("WeightedDie: need at least one face");
    for (double r : rates)
        if (!(r > 0.0) || !std::isfinite(r))
            throw std::invalid_argument("WeightedDie: rates must be finite and positive");
}

std::vector<double> WeightedDie::probabilities() const {
    validate();
    const double total = std::accumulate(rates.begin(), rates.end(), 0.0);
    std::vector<double> p(rates.size());
    for (std::size_t j = 0; j < rates.size(); ++j) p[j] = rates[j] / total;
    return p;
}

std::size_t weighted_sample(const WeightedDie& die, RandomStream& rng) {
    die.validate();
    std::vector<EdgeEvent> edges(die.rates.size());
    for (std::size_t j = 0; j < die.rates.size(); ++j) edges[j] = pdc(0.0, die.rates[j], rng);
    const RaceOutcome outcome = one_hot_race(edges);
    return outcome.winner;
}

WeightedDie currents_to_rates(const std::vector<double>& currents_ua,
                              const DeviceParams& params) {
    params.validate();
    WeightedDie die;
    for (double i : currents_ua) {
        if (i < params.i_min_ua || i > params.i_max_ua)
            throw std::domain_error("currents_to_rates: current outside operating range");
        die.rates.push_back(rate_from_current(i, params));
    }
    die.validate();
    return die;
}

std::uint64_t SpinState::code() const {
    std::uint64_t c = 0;
    for (std::size_t i = 0; i < spins.size(); ++i)
        if (spins[i] > 0) c |= (1ULL << i);
    return c;
}

SpinState SpinState::all_up(std::size_t n) {
    SpinState s;
    s.spins.assign(n, 1);
    return s;
}

SpinState SpinState::from_code(std::uint64_t code, std::size_t n) {
    SpinState s;
    s.spins.resize(n);
    for (std::size_t i = 0; i < n; ++i) s.spins[i] = (code >> i) & 1 ? 1 : -1;
    return s;
}

void IsingProblem::validate() const {
    if (n_spins == 0) throw std::invalid_argument("IsingProblem: need at least one spin");
    if (coupling.size() != n_spins || field.size() != n_spins)
        throw std::invalid_argument("IsingProblem: size mismatch");
    for (std::size_t i = 0; i < n_spins; ++i) {
        if (coupling[i].size() != n_spins)
            throw std::invalid_argument("IsingProblem: coupling matrix not square");
        if (coupling[i][i] != 0.0)
            throw std::invalid_argument("IsingProblem: coupling diagonal must be zero");
        for (std::size_t j = 0; j < n_spins; ++j)
            if (coupling[i][j] != coupling[j][i])
                throw std::invalid_argument("IsingProblem: coupling matrix not symmetric");
    }
    if (!(beta > 0.0 && w > 0.0)) throw std::invalid_argument("IsingProblem: need beta, w > 0");
}

double IsingProblem::energy(const SpinState& s) const {
    double e = 0.0;
    for (std::size_t i = 0; i < n_spins; ++i) {
        for (std::size_t j = i + 1; j < n_spins; ++j)
            e -= coupling[i][j] * s.spins[i] * s.spins[j];
        e -= field[i] * s.spins[i];
    }
    return e;
}

double IsingProblem::delta_energy(const SpinState& s, std::size_t i) const {
    double local = field[i];
    for (std::size_t j = 0; j < n_spins; ++j) local += coupling[i][j] * s.spins[j];
    return 2.0 * s.spins[i] * local;
}

IsingProblem IsingProblem::ferromagnet_grid(std::size_t rows, std::size_t cols, double j,
                                            double h, double beta, double w) {
    IsingProblem p;
    p.n_spins = rows * cols;
    p.coupling.assign(p.n_spins, std::vector<double>(p.n_spins, 0.0));
    p.field.assign(p.n_spins, h);
    p.beta = beta;
    p.w = w;
    auto idx = [cols](std::size_t r, std::size_t c) { return r * cols + c; };
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            if (c + 1 < cols) {
                p.coupling[idx(r, c)][idx(r, c + 1)] = j;
                p.coupling[idx(r, c + 1)][idx(r, c)] = j;
            }
            if (r + 1 < rows) {
                p.coupling[idx(r, c)][idx(r + 1, c)] = j;
                p.coupling[idx(r + 1, c)][idx(r, c)] = j;
            }
        }
    }
    p.validate();
    return p;
}

IsingProblem IsingProblem::random_couplings(std::size_t n, double j_scale, double h_scale,
                                            double beta, std::uint64_t seed, double w) {
    IsingProblem p;
    p.n_spins = n;
    p.coupling.assign(n, std::vector<double>(n, 0.0));
    p.field.assign(n, 0.0);
    p.beta = beta;
    p.w = w;
    RandomStream rng(seed);
    for (std::size_t i = 0; i < n; ++i) {
        p.field[i] = h_scale * rng.normal();
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = j_scale * rng.normal();
            p.coupling[i][j] = v;
            p.coupling[j][i] = v;
        }
    }
    p.validate();
    return p;
}

std::vector<SpinState> ising_mh_chain(const IsingProblem& problem, const SpinState& initial,
                                      std::size_t n_steps, RandomStream& rng) {
    problem.validate();
    if (initial.spins.size() != problem.n_spins)
        throw std::invalid_argument("ising_mh_chain: initial state size mismatch");
    if (n_steps < 1) throw std::invalid_argument("ising_mh_chain: need n_steps >= 1");

    std::vector<SpinState> chain;
    chain.reserve(n_steps);
    SpinState state = initial;
    for (std::size_t step = 0; step < n_steps; ++step) {
        const std::size_t i = rng.uniform_index(problem.n_spins);
        const double de = problem.delta_energy(state, i);
        if (mh_accept(de, problem.beta, problem.w, rng)) state.spins[i] = -state.spins[i];
        chain.push_back(state);
    }
    return chain;
}

std::vector<std::uint64_t> ising_mh_histogram(const IsingProblem& problem,
                                              const SpinState& initial, std::size_t n_steps,
                                              std::size_t burn_in, RandomStream& rng) {
    problem.validate();
    if (problem.n_spins > 20)
        throw std::invalid_argument("ising_mh_histogram: too many spins to enumerate");
    if (initial.spins.size() != problem.n_spins)
        throw std::invalid_argument("ising_mh_histogram: initial state size mismatch");

    std::vector<std::uint64_t> counts(1ULL << problem.n_spins, 0);
    SpinState state = initial;
    for (std::size_t step = 0; step < n_steps; ++step) {
        const std::size_t i = rng.uniform_index(problem.n_spins);
        const double de = problem.delta_energy(state, i);
        if (mh_accept(de, problem.beta, problem.w, rng)) state.spins[i] = -state.spins[i];
        if (step >= burn_in) ++counts[state.code()];
    }
    return counts;
}

std::vector<double> enumerate_boltzmann(const IsingProblem& problem) {
    problem.validate();
    if (problem.n_spins > 20)
        throw std::invalid_argument("enumerate_boltzmann: too many spins");
    const std::size_t n_states = 1ULL << problem.n_spins;
    std::vector<double> weights(n_states);
    double e_min = std::numeric_limits<double>::infinity();
    std::vector<double> energies(n_states);
    for (std::size_t c = 0; c < n_states; ++c) {
        energies[c] = problem.energy(SpinState::from_code(c, problem.n_spins));
        e_min = std::min(e_min, energies[c]);
    }
    double z = 0.0;
    for (std::size_t c = 0; c < n_states; ++c) {
        weights[c] = std::exp(-problem.beta * (energies[c] - e_min));
        z += weights[c];
    }
    for (double& w : weights) w /= z;
    return weights;
}

} // namespace smtj
