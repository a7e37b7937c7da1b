#pragma once

// Event-driven simulation of the exclusion process with conductances in a
// random environment, generator speeded by N^2. Only discordant bonds carry
// rate (exchanges of equal occupations are the identity), bonds are sampled
// from an indexed partial-sum tree, and clocks are continuous exponentials.

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "fluctlab/environment.hpp"
#include "fluctlab/event_tree.hpp"
#include "fluctlab/lattice.hpp"
#include "fluctlab/operators.hpp"
#include "fluctlab/rng.hpp"
#include "fluctlab/wfunction.hpp"

namespace fluctlab {

class Configuration {
 public:
  Configuration() = default;
  Configuration(LatticePtr lat, int fill) : lat_(std::move(lat)), occ_(lat_->size(), 0) {
    if (fill) {
      std::fill(occ_.begin(), occ_.end(), std::uint8_t{1});
      count_ = static_cast<std::int64_t>(occ_.size());
    }
  }

  static Configuration bernoulli(LatticePtr lat, double rho, std::uint64_t seed);

  const Lattice& lattice() const { return *lat_; }
  LatticePtr lattice_ptr() const { return lat_; }
  int occupancy(std::size_t site) const { return occ_[site]; }
  std::int64_t particle_count() const { return count_; }
  std::size_t size() const { return occ_.size(); }
  double density() const {
    return static_cast<double>(count_) / static_cast<double>(occ_.size());
  }

  // sigma^{x,x+e_j}: exchange two occupancies (no-op when equal).
  void exchange(std::size_t a, std::size_t b) { std::swap(occ_[a], occ_[b]); }

  void set_occupancy(std::size_t site, int value) {
    count_ += value - occ_[site];
    occ_[site] = static_cast<std::uint8_t>(value);
  }

  bool operator==(const Configuration& other) const { return occ_ == other.occ_; }

 private:
  LatticePtr lat_;
  std::vector<std::uint8_t> occ_;
  std::int64_t count_ = 0;
};

// Exchange-rate factor c_{x,x+e_j}(eta). The base family is
//   c = 1 + pair * [eta(x-e_j) + eta(x+2e_j)],           pair > -1/2;
// the extended family of Remark 2.2 adds
//   triple * [eta(x-2e)eta(x-e) + eta(x-e)eta(x+2e) + eta(x+2e)eta(x+3e)],
// with 1 + 2 pair + 3 triple > 0. Neither reads the exchanged occupations,
// which makes detailed balance exact bond by bond.
struct RateFamily {
  double pair = 0.0;
  double triple = 0.0;

  static RateFamily standard(double b);
  static RateFamily extended(double a_coef, double b_coef);

  bool is_extended() const { return triple != 0.0; }
  // phi'(rho) of the associated gradient polynomial.
  double phi_prime(double rho) const { return 1.0 + 2.0 * pair * rho + 3.0 * triple * rho * rho; }
  void validate() const;
};

struct Bond {
  std::size_t site;
  int axis;
};

struct Event {
  double time;
  std::uint64_t site;
  std::int32_t axis;
};

struct Trajectory {
  Configuration initial;
  std::vector<Event> events;
  double t_final = 0.0;

  // Reapply all exchanges to the initial configuration.
  Configuration replay_final() const;
};

class ExclusionDynamics;

// Streaming observer interface. Between events the configuration is constant;
// advance_to(t) moves an observer's internal clock across such a flat stretch.
class EventObserver {
 public:
  virtual ~EventObserver() = default;
  virtual void attach(const ExclusionDynamics&) {}
  virtual void advance_to(double) {}
  // Called with the pre-exchange configuration; `affected` lists every bond
  // whose rate or activity can change.
  virtual void before_exchange(const ExclusionDynamics&, Bond, std::span<const Bond>) {}
  virtual void after_exchange(const ExclusionDynamics&, Bond, std::span<const Bond>) {}
  virtual void at_sample(double, const ExclusionDynamics&) {}
};

struct SimulateOptions {
  bool record_events = false;
  std::vector<double> sample_times;       // strictly increasing within [0, T]
  std::uint64_t resync_interval = 1u << 20;  // full rate recomputation cadence
};

struct SimulateStats {
  std::uint64_t events = 0;
  double max_resync_rel_gap = 0.0;
};

class ExclusionDynamics {
 public:
  ExclusionDynamics(Configuration cfg, const WFunction& wf, const EnvironmentField& field,
                    RateFamily family, std::uint64_t seed);

  const Configuration& configuration() const { return cfg_; }
  const Lattice& lattice() const { return *lat_; }
  LatticePtr lattice_ptr() const { return lat_; }
  const RateFamily& family() const { return family_; }
  double time() const { return t_; }
  double total_rate() const { return tree_.total(); }
  std::uint64_t event_count() const { return events_; }

  // Current rate of the bond (site, site+e_axis); zero when inactive.
  double bond_rate(Bond b) const { return tree_.get(slot(b)); }
  // N^2 xi c(eta) regardless of activity (the generator's exchange rate).
  double exchange_rate(Bond b) const { return conductance(b) * rate_factor(b); }
  double conductance(Bond b) const {
    return cond_[static_cast<std::size_t>(b.axis)][b.site];
  }
  // c_{x,x+e_j}(eta) (or the extended variant).
  double rate_factor(Bond b) const;
  bool bond_active(Bond b) const {
    return cfg_.occupancy(b.site) != cfg_.occupancy(lat_->up(b.axis, b.site));
  }

  // One event: sample (dt, bond), exchange, update rates. Returns dt = +inf
  // and leaves the state untouched when no bond is active.
  std::pair<double, Bond> step(std::span<EventObserver* const> observers = {});

  // Run until t reaches t_final; invokes observers at events and samples.
  SimulateStats run(double t_final, std::span<EventObserver* const> observers,
                    const SimulateOptions& opts, Trajectory* traj = nullptr);

  // Replay a recorded trajectory through observers (identical state machine,
  // no randomness). The dynamics must have been constructed with the same
  // initial configuration and parameters.
  SimulateStats replay(const Trajectory& traj, std::span<EventObserver* const> observers,
                       const SimulateOptions& opts);

  // Recompute all bond rates from scratch; returns the relative gap between
  // the incrementally maintained total and the recomputed one.
  double resync();

  // |nu(eta) r(eta->sigma eta) - nu(sigma eta) r(sigma eta->eta)| / [nu(eta) r]
  // for an active bond; exactly zero for both rate families since the factor
  // c never reads the exchanged pair. Restores the configuration bit-exactly.
  double detailed_balance_residual(Bond b, double rho);

 private:
  std::size_t slot(Bond b) const {
    return b.site + static_cast<std::size_t>(b.axis) * lat_->size();
  }
  Bond bond_of_slot(std::size_t s) const {
    return Bond{s % lat_->size(), static_cast<int>(s / lat_->size())};
  }
  double bond_rate_now(Bond b) const {
    return bond_active(b) ? exchange_rate(b) : 0.0;
  }
  void collect_affected(Bond exchanged);
  void apply_exchange(Bond b);
  void refresh_affected();

  LatticePtr lat_;
  Configuration cfg_;
  RateFamily family_;
  std::vector<std::vector<double>> cond_;  // N^2 xi per axis/site
  EventTree tree_;
  Xoshiro256 rng_;
  double t_ = 0.0;
  std::uint64_t events_ = 0;
  std::vector<Bond> affected_;  // scratch, deduplicated
};

// Convenience wrapper: Bernoulli start, run to T.
struct SimulationSetup {
  WFunction wf;
  EnvironmentField field;
  RateFamily family;
  double rho = 0.5;
  double t_final = 1.0;
};

Trajectory simulate(const SimulationSetup& setup, std::uint64_t seed,
                    std::span<EventObserver* const> observers = {},
                    const SimulateOptions& opts = {.record_events = true});

// --- single-particle random walk -------------------------------------------

struct WalkState {
  std::size_t site;
  std::vector<std::int64_t> unwrapped;  // displacement in lattice steps
  double time = 0.0;
};

class RandomWalk {
 public:
  RandomWalk(const WFunction& wf, const EnvironmentField& field, std::size_t start,
             std::uint64_t seed);

  const WalkState& state() const { return state_; }
  const Lattice& lattice() const { return *lat_; }

  // One jump; returns (dt, axis, direction).
  std::tuple<double, int, int> step();
  // Jump rate out of the current site along (axis, direction).
  double jump_rate(int axis, int dir) const;

 private:
  LatticePtr lat_;
  std::vector<std::vector<double>> cond_;
  WalkState state_;
  Xoshiro256 rng_;
};

}  // namespace fluctlab
