#include "fluctlab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fluctlab {

Configuration Configuration::bernoulli(LatticePtr lat, double rho, std::uint64_t seed) {
  if (!(rho >= 0.0 && rho <= 1.0))
    throw std::invalid_argument("bernoulli: rho must lie in [0,1]");
  Configuration cfg(lat, 0);
  for (std::size_t i = 0; i < cfg.occ_.size(); ++i) {
    const double u = u64_to_unit(hash_combine(seed, static_cast<std::uint64_t>(i)));
    if (u < rho) {
      cfg.occ_[i] = 1;
      ++cfg.count_;
    }
  }
  return cfg;
}

Configuration Trajectory::replay_final() const {
  Configuration cfg = initial;
  const Lattice& lat = cfg.lattice();
  for (const Event& e : events)
    cfg.exchange(e.site, lat.up(e.axis, static_cast<std::size_t>(e.site)));
  return cfg;
}

RateFamily RateFamily::standard(double b) {
  RateFamily f;
  f.pair = b;
  f.triple = 0.0;
  f.validate();
  return f;
}

RateFamily RateFamily::extended(double a_coef, double b_coef) {
  RateFamily f;
  f.pair = a_coef;
  f.triple = b_coef;
  if (!(1.0 + 2.0 * a_coef + 3.0 * b_coef > 0.0))
    throw std::invalid_argument("rate family: 1 + 2a + 3b must be > 0");
  f.validate();
  return f;
}

void RateFamily::validate() const {
  if (triple == 0.0) {
    if (!(pair > -0.5))
      throw std::invalid_argument("rate family: b must be > -1/2");
    return;
  }
  // the rates themselves must be strictly positive for every neighborhood:
  // enumerate the 4 window sites (x-2e, x-e, x+2e, x+3e)
  for (int bits = 0; bits < 16; ++bits) {
    const int m2 = bits & 1, m1 = (bits >> 1) & 1, p2 = (bits >> 2) & 1, p3 = (bits >> 3) & 1;
    const double factor =
        1.0 + pair * (m1 + p2) + triple * (m2 * m1 + m1 * p2 + p2 * p3);
    if (!(factor > 0.0))
      throw std::invalid_argument("rate family: extended rates not strictly positive");
  }
}

ExclusionDynamics::ExclusionDynamics(Configuration cfg, const WFunction& wf,
                                     const EnvironmentField& field, RateFamily family,
                                     std::uint64_t seed)
    : lat_(cfg.lattice_ptr()),
      cfg_(std::move(cfg)),
      family_(family),
      cond_(bond_conductances(wf, field, *lat_)),
      tree_(lat_->size() * static_cast<std::size_t>(lat_->dim())),
      rng_(seed) {
  family_.validate();
  if (family_.is_extended() && lat_->n() < 4)
    throw std::invalid_argument(
        "dynamics: extended rates need N >= 4 so the c-window avoids the "
        "exchanged pair");
  resync();
}

double ExclusionDynamics::rate_factor(Bond b) const {
  const int j = b.axis;
  const std::size_t x = b.site;
  const std::size_t xm1 = lat_->down(j, x);
  const std::size_t xp1 = lat_->up(j, x);
  const std::size_t xp2 = lat_->up(j, xp1);
  double f = 1.0 + family_.pair * (cfg_.occupancy(xm1) + cfg_.occupancy(xp2));
  if (family_.is_extended()) {
    const std::size_t xm2 = lat_->down(j, xm1);
    const std::size_t xp3 = lat_->up(j, xp2);
    const int em2 = cfg_.occupancy(xm2), em1 = cfg_.occupancy(xm1);
    const int ep2 = cfg_.occupancy(xp2), ep3 = cfg_.occupancy(xp3);
    f += family_.triple * (em2 * em1 + em1 * ep2 + ep2 * ep3);
  }
  return f;
}

double ExclusionDynamics::resync() {
  const double before = tree_.total();
  std::vector<double> rates(tree_.leaf_count(), 0.0);
  for (std::size_t s = 0; s < rates.size(); ++s) rates[s] = bond_rate_now(bond_of_slot(s));
  tree_.assign(rates);
  const double after = tree_.total();
  if (after <= 0.0 && cfg_.particle_count() > 0 &&
      cfg_.particle_count() < static_cast<std::int64_t>(cfg_.size()) && events_ > 0)
    throw std::runtime_error("dynamics: total rate underflow with active particles");
  if (after == 0.0) return 0.0;
  return std::abs(before - after) / after;
}

void ExclusionDynamics::collect_affected(Bond exchanged) {
  affected_.clear();
  const int window_lo = family_.is_extended() ? -3 : -2;
  const int window_hi = family_.is_extended() ? 2 : 1;
  const std::size_t flipped[2] = {exchanged.site, lat_->up(exchanged.axis, exchanged.site)};
  for (std::size_t s : flipped) {
    for (int i = 0; i < lat_->dim(); ++i) {
      for (int off = window_lo; off <= window_hi; ++off)
        affected_.push_back(Bond{lat_->shifted(i, s, off), i});
    }
  }
  std::sort(affected_.begin(), affected_.end(), [&](Bond a, Bond b) {
    return slot(a) < slot(b);
  });
  affected_.erase(std::unique(affected_.begin(), affected_.end(),
                              [&](Bond a, Bond b) { return slot(a) == slot(b); }),
                  affected_.end());
}

void ExclusionDynamics::apply_exchange(Bond b) {
  cfg_.exchange(b.site, lat_->up(b.axis, b.site));
}

void ExclusionDynamics::refresh_affected() {
  for (Bond b : affected_) tree_.set(slot(b), bond_rate_now(b));
}

std::pair<double, Bond> ExclusionDynamics::step(std::span<EventObserver* const> observers) {
  const double total = tree_.total();
  if (total <= 0.0)
    return {std::numeric_limits<double>::infinity(), Bond{0, -1}};
  const double dt = rng_.exponential(total);
  const double u = rng_.uniform() * total;
  const Bond b = bond_of_slot(tree_.sample(u));
  const double t_event = t_ + dt;
  for (auto* obs : observers) obs->advance_to(t_event);
  collect_affected(b);
  for (auto* obs : observers) obs->before_exchange(*this, b, affected_);
  apply_exchange(b);
  refresh_affected();
  for (auto* obs : observers) obs->after_exchange(*this, b, affected_);
  t_ = t_event;
  ++events_;
  return {dt, b};
}

SimulateStats ExclusionDynamics::run(double t_final, std::span<EventObserver* const> observers,
                                     const SimulateOptions& opts, Trajectory* traj) {
  SimulateStats stats;
  for (auto* obs : observers) obs->attach(*this);
  if (traj) {
    traj->initial = cfg_;
    traj->events.clear();
    traj->t_final = t_final;
  }
  std::size_t sample_idx = 0;
  const auto& samples = opts.sample_times;
  while (true) {
    const double total = tree_.total();
    double t_event = std::numeric_limits<double>::infinity();
    if (total > 0.0) t_event = t_ + rng_.exponential(total);

    while (sample_idx < samples.size() && samples[sample_idx] <= t_final &&
           samples[sample_idx] <= std::min(t_event, t_final)) {
      for (auto* obs : observers) {
        obs->advance_to(samples[sample_idx]);
        obs->at_sample(samples[sample_idx], *this);
      }
      ++sample_idx;
    }
    if (t_event > t_final) {
      for (auto* obs : observers) obs->advance_to(t_final);
      t_ = t_final;
      break;
    }

    const double u = rng_.uniform() * total;
    const Bond b = bond_of_slot(tree_.sample(u));
    for (auto* obs : observers) obs->advance_to(t_event);
    collect_affected(b);
    for (auto* obs : observers) obs->before_exchange(*this, b, affected_);
    apply_exchange(b);
    refresh_affected();
    for (auto* obs : observers) obs->after_exchange(*this, b, affected_);
    t_ = t_event;
    ++events_;
    ++stats.events;
    if (traj && opts.record_events)
      traj->events.push_back(Event{t_event, static_cast<std::uint64_t>(b.site),
                                   static_cast<std::int32_t>(b.axis)});
    if (opts.resync_interval && events_ % opts.resync_interval == 0)
      stats.max_resync_rel_gap = std::max(stats.max_resync_rel_gap, resync());
  }
  return stats;
}

SimulateStats ExclusionDynamics::replay(const Trajectory& traj,
                                        std::span<EventObserver* const> observers,
                                        const SimulateOptions& opts) {
  SimulateStats stats;
  for (auto* obs : observers) obs->attach(*this);
  std::size_t sample_idx = 0;
  const auto& samples = opts.sample_times;
  auto emit_samples_until = [&](double t_limit) {
    while (sample_idx < samples.size() && samples[sample_idx] <= t_limit) {
      for (auto* obs : observers) {
        obs->advance_to(samples[sample_idx]);
        obs->at_sample(samples[sample_idx], *this);
      }
      ++sample_idx;
    }
  };
  for (const Event& e : traj.events) {
    if (e.time > traj.t_final) break;
    emit_samples_until(std::min(e.time, traj.t_final));
    const Bond b{static_cast<std::size_t>(e.site), e.axis};
    for (auto* obs : observers) obs->advance_to(e.time);
    collect_affected(b);
    for (auto* obs : observers) obs->before_exchange(*this, b, affected_);
    apply_exchange(b);
    refresh_affected();
    for (auto* obs : observers) obs->after_exchange(*this, b, affected_);
    t_ = e.time;
    ++events_;
    ++stats.events;
  }
  emit_samples_until(traj.t_final);
  for (auto* obs : observers) obs->advance_to(traj.t_final);
  t_ = traj.t_final;
  return stats;
}

Trajectory simulate(const SimulationSetup& setup, std::uint64_t seed,
                    std::span<EventObserver* const> observers, const SimulateOptions& opts) {
  const LatticePtr lat = make_lattice(setup.field.dim, setup.field.n);
  Configuration cfg = Configuration::bernoulli(
      lat, setup.rho, derive_seed(seed, seed_tag::kInitialConfig));
  ExclusionDynamics dyn(std::move(cfg), setup.wf, setup.field, setup.family,
                        derive_seed(seed, seed_tag::kDynamics));
  Trajectory traj;
  dyn.run(setup.t_final, observers, opts, &traj);
  return traj;
}

double ExclusionDynamics::detailed_balance_residual(Bond b, double rho) {
  const std::int64_t count_before = cfg_.particle_count();
  const double forward = exchange_rate(b);
  // apply sigma, evaluate the reversed rate from the exchanged configuration,
  // then restore
  const std::size_t x = b.site;
  const std::size_t y = lat_->up(b.axis, b.site);
  cfg_.exchange(x, y);
  const double backward = exchange_rate(b);
  const std::int64_t count_after = cfg_.particle_count();
  cfg_.exchange(x, y);

  const std::int64_t dk = count_after - count_before;
  double measure_ratio = 1.0;  // nu(eta)/nu(sigma eta)
  if (dk != 0) measure_ratio = std::pow(rho / (1.0 - rho), static_cast<double>(-dk));
  return std::abs(measure_ratio * forward - backward) / forward;
}

RandomWalk::RandomWalk(const WFunction& wf, const EnvironmentField& field, std::size_t start,
                       std::uint64_t seed)
    : lat_(make_lattice(field.dim, field.n)),
      cond_(bond_conductances(wf, field, *lat_)),
      rng_(seed) {
  state_.site = start;
  state_.unwrapped.assign(static_cast<std::size_t>(field.dim), 0);
}

double RandomWalk::jump_rate(int axis, int dir) const {
  if (dir > 0) return cond_[static_cast<std::size_t>(axis)][state_.site];
  return cond_[static_cast<std::size_t>(axis)][lat_->down(axis, state_.site)];
}

std::tuple<double, int, int> RandomWalk::step() {
  const int d = lat_->dim();
  double total = 0.0;
  for (int j = 0; j < d; ++j) total += jump_rate(j, +1) + jump_rate(j, -1);
  const double dt = rng_.exponential(total);
  double u = rng_.uniform() * total;
  int axis = 0, dir = +1;
  bool picked = false;
  for (int j = 0; j < d && !picked; ++j) {
    for (int s : {+1, -1}) {
      const double r = jump_rate(j, s);
      if (u < r) {
        axis = j;
        dir = s;
        picked = true;
        break;
      }
      u -= r;
    }
  }
  if (!picked) {  // roundoff overshoot at the cumulative boundary
    axis = d - 1;
    dir = -1;
  }
  state_.site = (dir > 0) ? lat_->up(axis, state_.site) : lat_->down(axis, state_.site);
  state_.unwrapped[static_cast<std::size_t>(axis)] += dir;
  state_.time += dt;
  return {dt, axis, dir};
}

}  // namespace fluctlab
