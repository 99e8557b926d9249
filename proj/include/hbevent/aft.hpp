#pragma once

// Alternating-Frequency-Time baseline: sample the ansatz, march the state
// machine sample to sample (sample-and-hold switching), transform back.

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "hbevent/hbm.hpp"
#include "hbevent/log.hpp"
#include "hbevent/time_oracle.hpp"

namespace hbevent {

struct AftConfig {
  int N_td = 256;  // samples per period
  int H = 7;
  bool allow_aliasing = false;  // permit N_td < 2(2H+1)
  int max_switches_per_sample = 4;
};

/// One switch taken during marching: at sample k of pass `pass` to successor slot `pos`.
struct AftSwitch {
  int pass = 0;
  int sample = 0;
  std::size_t pos = 0;
};

/// Switching decisions of one AFT evaluation; replaying them freezes the
/// switch samples (the AFT counterpart of an analytic Jacobian).
struct AftPlan {
  int initial_state = 0;
  std::vector<AftSwitch> switches;
};

struct AftResult {
  std::vector<FourierSeries> force;  // F_n per component, order H
  AftPlan plan;
  std::vector<int> states;  // active state per sample, second pass
};

namespace detail {

struct Samples {
  std::vector<double> tau;
  std::vector<std::vector<TimeDual>> y;  // [sample][component]
};

inline Samples sample_series(const std::vector<FourierSeries>& y, double omega, int N) {
  Samples s;
  std::vector<FourierSeries> dy;
  for (const auto& c : y) dy.push_back(differentiate(c));
  s.tau.resize(static_cast<std::size_t>(N));
  s.y.resize(static_cast<std::size_t>(N));
  for (int k = 0; k < N; ++k) {
    const double t = kTwoPi * k / N;
    s.tau[static_cast<std::size_t>(k)] = t;
    auto& row = s.y[static_cast<std::size_t>(k)];
    for (std::size_t c = 0; c < y.size(); ++c) row.push_back({evaluate_real(y[c], t), omega * evaluate_real(dy[c], t)});
  }
  return s;
}

inline AftResult march(const SystemDefinition& sys, const std::vector<FourierSeries>& y, double omega,
                       const AftConfig& cfg, const AftPlan* replay) {
  const int N = cfg.N_td;
  if (N < 1) throw Error(ErrorKind::InvalidArgument, "N_td must be positive");
  if (!cfg.allow_aliasing && N < 2 * (2 * cfg.H + 1))
    throw Error(ErrorKind::InvalidArgument, "N_td below the anti-aliasing floor 2(2H+1)");
  if (y.size() != sys.dimension()) throw Error(ErrorKind::InvalidArgument, "one series per component required");

  const Samples smp = sample_series(y, omega, N);
  auto ctx_at = [&](int k) {
    PointContext c;
    c.sys = &sys;
    c.tau = smp.tau[static_cast<std::size_t>(k)];
    c.omega = omega;
    c.y = smp.y[static_cast<std::size_t>(k)];
    return c;
  };

  PointState ps;
  if (replay) {
    const auto& st = sys.states[sys.state_index(replay->initial_state)];
    const auto& rules = st.initial_updates.empty() ? st.internal_updates : st.initial_updates;
    ps = PointState{&st, apply_updates_point(rules, st, ctx_at(0), std::vector<double>(sys.internal.size(), 0.0),
                                             std::vector<TimeDual>(sys.named().size()))};
  } else {
    try {
      ps = resolve_point_state(sys, [&] { return ctx_at(0); });
    } catch (const Error& e) {
      throw Error(ErrorKind::StateResolutionFailure, std::string("AFT sample 0: ") + e.what());
    }
  }

  AftResult res;
  res.plan.initial_state = ps.st->id;
  EventWatch watch(*ps.st, 1e-12);
  std::size_t next_switch = 0;

  auto switch_to = [&](std::size_t pos, const PointContext& c) {
    const int to = ps.st->successors[pos];
    const auto& next = sys.states[sys.state_index(to)];
    auto v = apply_updates_point(next.internal_updates, next, c, ps.v, eval_named_point(*ps.st, c, ps.v));
    ps = PointState{&next, std::move(v)};
    watch = EventWatch(*ps.st, 1e-12);
    watch.update(watch.conditions(c, ps.v));
  };

  std::vector<std::vector<double>> f(sys.dimension(), std::vector<double>(static_cast<std::size_t>(N)));
  res.states.resize(static_cast<std::size_t>(N));
  for (int pass = 0; pass < 2; ++pass)
    for (int k = 0; k < N; ++k) {
      const PointContext c = ctx_at(k);
      if (replay) {
        while (next_switch < replay->switches.size() && replay->switches[next_switch].pass == pass &&
               replay->switches[next_switch].sample == k)
          switch_to(replay->switches[next_switch++].pos, c);
      } else if (pass == 0 && k == 0) {
        watch.update(watch.conditions(c, ps.v));
      } else {
        for (int sw = 0;; ++sw) {
          const auto g = watch.conditions(c, ps.v);
          std::optional<std::size_t> take;
          const auto named = eval_named_point(*ps.st, c, ps.v);
          for (std::size_t pos : watch.crossed(g)) {
            const Transition* tr = ps.st->transition_to(ps.st->successors[pos]);
            if (tr->guard && !compare(eval_point(tr->guard->expr, c, ps.v, named).v, tr->guard->op)) continue;
            take = pos;
            break;
          }
          if (!take || sw >= cfg.max_switches_per_sample) {
            watch.update(g);
            break;
          }
          res.plan.switches.push_back({pass, k, *take});
          switch_to(*take, c);
        }
      }
      if (pass == 1) {
        const auto named = eval_named_point(*ps.st, c, ps.v);
        for (std::size_t i = 0; i < sys.dimension(); ++i)
          f[i][static_cast<std::size_t>(k)] = eval_point(ps.st->dynamics[i], c, ps.v, named).v;
        res.states[static_cast<std::size_t>(k)] = ps.st->id;
      }
    }

  // direct DFT: F_n = (1/N) sum_k f_k e^{-i n tau_k}
  for (const auto& fi : f) {
    FourierSeries F(cfg.H);
    for (int n = 0; n <= cfg.H; ++n) {
      cplx acc{0.0, 0.0};
      for (int k = 0; k < N; ++k) acc += fi[static_cast<std::size_t>(k)] * std::polar(1.0, -n * smp.tau[static_cast<std::size_t>(k)]);
      F.set_harmonic(n, acc / static_cast<double>(N));
    }
    res.force.push_back(std::move(F));
  }
  return res;
}

}  // namespace detail

/// AFT force coefficients of y at frequency omega.
inline AftResult aft_evaluate(const SystemDefinition& sys, const std::vector<FourierSeries>& y, double omega,
                              const AftConfig& cfg) {
  return detail::march(sys, y, omega, cfg, nullptr);
}

inline std::vector<FourierSeries> aft_force_coefficients(const SystemDefinition& sys, const std::vector<FourierSeries>& y,
                                                         double omega, const AftConfig& cfg) {
  return aft_evaluate(sys, y, omega, cfg).force;
}

/// AFT force with the switching decisions of `plan` imposed.
inline std::vector<FourierSeries> aft_replay(const SystemDefinition& sys, const std::vector<FourierSeries>& y,
                                             double omega, const AftConfig& cfg, const AftPlan& plan) {
  return detail::march(sys, y, omega, cfg, &plan).force;
}

// ---------------------------------------------------------------------------
// Method comparison

struct CompareSettings {
  int H = 7;
  double omega = 1.0;
  std::vector<int> sample_counts{64, 128, 256, 512, 1024, 2048, 4096, 8192, 16384};
  int trials = 1000;
  std::uint64_t seed = 1;
  int jacobian_trials = 5;  // draws that also compare Jacobians (FD is N_y times dearer)
  int timing_draws = 3;
  int timing_repetitions = 5;
  int threads = 1;
  // draw: Y_n = amplitude (a + i b) / n^decay, a, b standard normal; Y_0 = offset
  double amplitude = 1.0;
  double decay = 1.0;
  std::vector<double> offset;  // per component, default 0
  int max_redraws = 50;
  double fd_step = 1e-6;
};

struct CompareRow {
  std::string method;  // "aft" or "analytic" (self-comparison control)
  int N_td = 0;
  double err_mean = 0.0, err_min = 0.0, err_max = 0.0;
  double jac_fd_mean = 0.0, jac_fd_max = 0.0;          // FD Jacobian of the AFT force
  double jac_frozen_mean = 0.0, jac_frozen_max = 0.0;  // switch samples frozen
  double t_force = 0.0, t_jacobian = 0.0;              // seconds per evaluation (median)
  double ratio_force = 0.0, ratio_jacobian = 0.0;      // T_AFT / T_analytic
};

struct CompareReport {
  std::string system;
  int H = 0, trials = 0, rejected_draws = 0;
  std::uint64_t seed = 0;
  double t_analytic_force = 0.0, t_analytic_jacobian = 0.0;
  std::vector<CompareRow> rows;  // control row first
  // linear fit t_force = slope N_td + intercept over the AFT rows
  double fit_slope = 0.0, fit_intercept = 0.0, fit_r2 = 0.0;
  std::optional<int> crossover_N;  // smallest N_td from which T_AFT > T_analytic for all larger counts
  std::string machine;

  bool error_monotone() const {
    for (std::size_t i = 2; i < rows.size(); ++i)
      if (rows[i].err_mean > rows[i - 1].err_mean) return false;
    return true;
  }
};

namespace detail {

inline Eigen::VectorXd pack_force(const std::vector<FourierSeries>& F, int H) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(F.size() * (2 * static_cast<std::size_t>(H) + 1)));
  Eigen::Index i = 0;
  for (const auto& s : F) {
    v(i++) = s[0].real();
    for (int n = 1; n <= H; ++n) {
      v(i++) = s[n].real();
      v(i++) = s[n].imag();
    }
  }
  return v;
}

inline double relative(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const double nb = b.norm();
  return nb > 0.0 ? (a - b).norm() / nb : (a - b).norm();
}
inline double relative(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const double nb = b.norm();
  return nb > 0.0 ? (a - b).norm() / nb : (a - b).norm();
}

inline std::vector<FourierSeries> random_draw(const SystemDefinition& sys, const CompareSettings& s, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  std::vector<FourierSeries> y;
  for (std::size_t c = 0; c < sys.dimension(); ++c) {
    FourierSeries f(s.H);
    f.set_harmonic(0, c < s.offset.size() ? s.offset[c] : 0.0);
    for (int n = 1; n <= s.H; ++n) {
      const double a = nd(rng), b = nd(rng);
      f.set_harmonic(n, s.amplitude * cplx(a, b) / std::pow(static_cast<double>(n), s.decay));
    }
    y.push_back(std::move(f));
  }
  return y;
}

struct Analytic {
  Eigen::VectorXd F;
  Eigen::MatrixXd J;
};

inline HBProblem force_problem(const SystemDefinition& sys, const CompareSettings& s) {
  HBProblem p;
  p.sys = sys;
  p.H = s.H;
  p.omega = s.omega;
  return p;
}

inline Analytic analytic_force(const HBProblem& p, const std::vector<FourierSeries>& y, bool jacobian) {
  const Eigen::VectorXd u = pack_series(p, y);
  const Eigen::MatrixXd W = jacobian ? unknown_seeds(p)
                                     : Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(p.primal_size()), 0);
  auto jets = evaluate_residual_jets(p, u, W, jacobian ? 1 : 0);
  Analytic a;
  const auto k = static_cast<Eigen::Index>(W.cols());
  a.F.resize(static_cast<Eigen::Index>(p.n_y()));
  a.J.resize(static_cast<Eigen::Index>(p.n_y()), k);
  Eigen::Index row = 0;
  for (const auto& comp : jets.force)
    for (int n = 0; n <= p.H; ++n) {
      const auto& cj = comp[static_cast<std::size_t>(n)];
      a.F(row) = cj.val.real();
      for (Eigen::Index j = 0; j < k; ++j) a.J(row, j) = cj.d[static_cast<std::size_t>(j)].real();
      ++row;
      if (n == 0) continue;
      a.F(row) = cj.val.imag();
      for (Eigen::Index j = 0; j < k; ++j) a.J(row, j) = cj.d[static_cast<std::size_t>(j)].imag();
      ++row;
    }
  return a;
}

/// Central-difference Jacobian of an AFT force map over the packed unknowns.
inline Eigen::MatrixXd fd_force_jacobian(const HBProblem& p, const Eigen::VectorXd& u, double h,
                                         const std::function<std::vector<FourierSeries>(const std::vector<FourierSeries>&)>& F) {
  const auto n = static_cast<Eigen::Index>(p.n_y());
  Eigen::MatrixXd J(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    Eigen::VectorXd up = u, um = u;
    const double step = h * std::max(1.0, std::abs(u(j)));
    up(j) += step;
    um(j) -= step;
    J.col(j) = (pack_force(F(unpack_series(p, up)), p.H) - pack_force(F(unpack_series(p, um)), p.H)) / (2.0 * step);
  }
  return J;
}

template <class Fn>
double median_seconds(int reps, Fn&& fn) {
  std::vector<double> t;
  for (int r = 0; r < std::max(1, reps); ++r) {
    const auto a = std::chrono::steady_clock::now();
    fn();
    t.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - a).count());
  }
  std::sort(t.begin(), t.end());
  return t[t.size() / 2];
}

struct TrialErrors {
  bool ok = false;
  int redraws = 0;
  std::vector<double> err, jac_fd, jac_frozen;  // per sample count; Jacobian entries NaN when skipped
};

}  // namespace detail

/// Analytic vs. AFT force (and Jacobian) on random draws of Y.
inline CompareReport compare_methods(const SystemDefinition& sys, const CompareSettings& s) {
  using namespace detail;
  if (s.trials < 1 || s.sample_counts.empty()) throw Error(ErrorKind::InvalidArgument, "need trials and sample counts");
  const HBProblem p = force_problem(sys, s);
  const std::size_t K = s.sample_counts.size();

  auto draw_valid = [&](std::mt19937_64& rng, int& redraws) {
    for (int attempt = 0; attempt <= s.max_redraws; ++attempt) {
      auto y = random_draw(sys, s, rng);
      try {
        Analytic a = analytic_force(p, y, false);
        aft_evaluate(sys, y, s.omega, AftConfig{s.sample_counts.front(), s.H, true});
        return std::make_optional(std::make_pair(std::move(y), std::move(a)));
      } catch (const Error& e) {
        log::debug(std::string("aft redraw: ") + e.what());
        ++redraws;
      }
    }
    return std::optional<std::pair<std::vector<FourierSeries>, Analytic>>{};
  };

  std::vector<TrialErrors> trials(static_cast<std::size_t>(s.trials));
  auto run_trial = [&](int t) {
    std::seed_seq seq{static_cast<std::uint64_t>(s.seed), static_cast<std::uint64_t>(t)};
    std::mt19937_64 rng(seq);
    TrialErrors& te = trials[static_cast<std::size_t>(t)];
    auto d = draw_valid(rng, te.redraws);
    if (!d) return;
    const auto& [y, a0] = *d;
    const bool jac = t < s.jacobian_trials;
    Analytic a = jac ? analytic_force(p, y, true) : a0;
    const Eigen::VectorXd u = pack_series(p, y);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (int N : s.sample_counts) {
      const AftConfig cfg{N, s.H, true};
      const AftResult r = aft_evaluate(sys, y, s.omega, cfg);
      te.err.push_back(relative(pack_force(r.force, s.H), a.F));
      if (!jac) {
        te.jac_fd.push_back(nan);
        te.jac_frozen.push_back(nan);
        continue;
      }
      const Eigen::MatrixXd Jfd = fd_force_jacobian(p, u, s.fd_step, [&](const std::vector<FourierSeries>& yy) {
        return aft_force_coefficients(sys, yy, s.omega, cfg);
      });
      const Eigen::MatrixXd Jfz = fd_force_jacobian(p, u, s.fd_step, [&](const std::vector<FourierSeries>& yy) {
        return aft_replay(sys, yy, s.omega, cfg, r.plan);
      });
      te.jac_fd.push_back(relative(Jfd, a.J));
      te.jac_frozen.push_back(relative(Jfz, a.J));
    }
    te.ok = true;
  };

  const int nthreads = std::max(1, std::min(s.threads, s.trials));
  if (nthreads == 1) {
    for (int t = 0; t < s.trials; ++t) run_trial(t);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < nthreads; ++w)
      pool.emplace_back([&, w] {
        for (int t = w; t < s.trials; t += nthreads) run_trial(t);
      });
    for (auto& th : pool) th.join();
  }

  CompareReport rep;
  rep.system = sys.name;
  rep.H = s.H;
  rep.seed = s.seed;
  for (const auto& te : trials) {
    rep.rejected_draws += te.redraws;
    if (te.ok) ++rep.trials;
  }
  if (rep.trials == 0) throw Error(ErrorKind::InvalidArgument, "no valid random draw for the comparison");

  // timing on a few fixed draws, single thread
  std::vector<std::vector<FourierSeries>> tdraws;
  {
    std::seed_seq seq{static_cast<std::uint64_t>(s.seed), std::uint64_t{0x7f4a7c15}};
    std::mt19937_64 rng(seq);
    int dummy = 0;
    for (int i = 0; i < std::max(1, s.timing_draws); ++i)
      if (auto d = draw_valid(rng, dummy)) tdraws.push_back(d->first);
  }
  auto timed = [&](auto&& fn) {
    double total = 0.0;
    for (const auto& y : tdraws) total += median_seconds(s.timing_repetitions, [&] { fn(y); });
    return total / static_cast<double>(std::max<std::size_t>(1, tdraws.size()));
  };
  rep.t_analytic_force = timed([&](const auto& y) { analytic_force(p, y, false); });
  rep.t_analytic_jacobian = timed([&](const auto& y) { analytic_force(p, y, true); });

  CompareRow control;
  control.method = "analytic";
  {
    std::seed_seq seq{static_cast<std::uint64_t>(s.seed), std::uint64_t{0x5eed}};
    std::mt19937_64 rng(seq);
    int dummy = 0;
    if (auto d = draw_valid(rng, dummy)) {
      const Analytic a1 = analytic_force(p, d->first, true);
      const Analytic a2 = analytic_force(p, d->first, true);
      control.err_mean = control.err_max = relative(a1.F, a2.F);
      control.jac_fd_mean = control.jac_fd_max = relative(a1.J, a2.J);
      control.jac_frozen_mean = control.jac_frozen_max = control.jac_fd_mean;
    }
  }
  control.t_force = rep.t_analytic_force;
  control.t_jacobian = rep.t_analytic_jacobian;
  control.ratio_force = control.ratio_jacobian = 1.0;
  rep.rows.push_back(control);

  for (std::size_t k = 0; k < K; ++k) {
    CompareRow row;
    row.method = "aft";
    row.N_td = s.sample_counts[k];
    std::vector<double> e, jf, jz;
    for (const auto& te : trials) {
      if (!te.ok) continue;
      e.push_back(te.err[k]);
      if (!std::isnan(te.jac_fd[k])) {
        jf.push_back(te.jac_fd[k]);
        jz.push_back(te.jac_frozen[k]);
      }
    }
    auto mean = [](const std::vector<double>& v) {
      return v.empty() ? std::numeric_limits<double>::quiet_NaN()
                       : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    };
    auto maxv = [](const std::vector<double>& v) {
      return v.empty() ? std::numeric_limits<double>::quiet_NaN() : *std::max_element(v.begin(), v.end());
    };
    row.err_mean = mean(e);
    row.err_min = *std::min_element(e.begin(), e.end());
    row.err_max = maxv(e);
    row.jac_fd_mean = mean(jf);
    row.jac_fd_max = maxv(jf);
    row.jac_frozen_mean = mean(jz);
    row.jac_frozen_max = maxv(jz);
    const AftConfig cfg{row.N_td, s.H, true};
    row.t_force = timed([&](const auto& y) { aft_evaluate(sys, y, s.omega, cfg); });
    // FD Jacobian cost: one AFT evaluation plus two per unknown
    row.t_jacobian = row.t_force * static_cast<double>(2 * p.n_y() + 1);
    row.ratio_force = row.t_force / rep.t_analytic_force;
    row.ratio_jacobian = row.t_jacobian / rep.t_analytic_jacobian;
    rep.rows.push_back(row);
  }

  // least-squares line through (N_td, t_force)
  const std::size_t m = K;
  Eigen::MatrixXd A(static_cast<Eigen::Index>(m), 2);
  Eigen::VectorXd b(static_cast<Eigen::Index>(m));
  for (std::size_t k = 0; k < m; ++k) {
    A(static_cast<Eigen::Index>(k), 0) = rep.rows[k + 1].N_td;
    A(static_cast<Eigen::Index>(k), 1) = 1.0;
    b(static_cast<Eigen::Index>(k)) = rep.rows[k + 1].t_force;
  }
  const Eigen::Vector2d c = A.colPivHouseholderQr().solve(b);
  rep.fit_slope = c(0);
  rep.fit_intercept = c(1);
  const double ss_res = (A * c - b).squaredNorm();
  const double ss_tot = (b.array() - b.mean()).matrix().squaredNorm();
  rep.fit_r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  for (std::size_t k = m; k-- > 0;) {
    if (rep.rows[k + 1].ratio_force <= 1.0) break;
    rep.crossover_N = rep.rows[k + 1].N_td;
  }

  rep.machine = "threads=" + std::to_string(std::thread::hardware_concurrency()) + " compiler=" +
#if defined(__clang__)
                "clang " __clang_version__;
#elif defined(__GNUC__)
                "gcc " __VERSION__;
#else
                "unknown";
#endif
  return rep;
}

/// Rows `method,N_td,trials,err_mean,err_min,err_max,jac_fd_mean,jac_fd_max,
/// jac_frozen_mean,jac_frozen_max,t_force_s,t_jacobian_s,ratio_force,ratio_jacobian`.
inline void write_compare_csv(std::ostream& os, const CompareReport& r) {
  os << "method,N_td,trials,err_mean,err_min,err_max,jac_fd_mean,jac_fd_max,jac_frozen_mean,jac_frozen_max,"
        "t_force_s,t_jacobian_s,ratio_force,ratio_jacobian\n";
  os.precision(10);
  for (const auto& w : r.rows)
    os << w.method << ',' << w.N_td << ',' << r.trials << ',' << w.err_mean << ',' << w.err_min << ',' << w.err_max
       << ',' << w.jac_fd_mean << ',' << w.jac_fd_max << ',' << w.jac_frozen_mean << ',' << w.jac_frozen_max << ','
       << w.t_force << ',' << w.t_jacobian << ',' << w.ratio_force << ',' << w.ratio_jacobian << '\n';
}

/// Human-readable summary table.
inline void print_compare_summary(std::ostream& os, const CompareReport& r) {
  os << "system " << r.system << ", H = " << r.H << ", trials " << r.trials << " (redraws " << r.rejected_draws
     << "), seed " << r.seed << '\n'
     << "analytic: force " << r.t_analytic_force * 1e3 << " ms, force+Jacobian " << r.t_analytic_jacobian * 1e3
     << " ms\n";
  os << "  N_td    err_mean     err_max   jac_fd_mean  T_AFT/T_ana\n";
  char buf[160];
  for (std::size_t i = 1; i < r.rows.size(); ++i) {
    const auto& w = r.rows[i];
    std::snprintf(buf, sizeof buf, "%6d  %10.3e  %10.3e  %12.3e  %10.3f\n", w.N_td, w.err_mean, w.err_max,
                  w.jac_fd_mean, w.ratio_force);
    os << buf;
  }
  os << "cost fit: t = " << r.fit_slope << " N_td + " << r.fit_intercept << " s, R^2 = " << r.fit_r2 << '\n';
  if (r.crossover_N)
    os << "AFT slower than the analytic force from N_td = " << *r.crossover_N << '\n';
  else
    os << "no crossover within the tested sample counts\n";
  os << "machine: " << r.machine << '\n';
}

}  // namespace hbevent
