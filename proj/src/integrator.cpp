#include "riser/integrator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <fmt/format.h>

#include "riser/error.hpp"
#include "riser/log.hpp"
#include "riser/spatial_ops.hpp"

namespace riser {

std::string_view to_string(Scheme s) {
  return s == Scheme::Newmark ? "newmark" : "explicit-rk4";
}

double stable_dt(const Grid1D& grid, const Parameters& params, const TensionProfile& a) {
  const double dz = grid.dz();
  double bound = dz * dz / std::sqrt(params.k);
  if (a.a_max_abs() > 0.0) bound = std::min(bound, dz / std::sqrt(a.a_max_abs()));
  return 0.5 * bound;
}

double auto_dt(const SchemeConfig& scheme, const RiserModel& model) {
  if (scheme.scheme == Scheme::ExplicitRk4) {
    return stable_dt(model.grid, model.params, model.tension);
  }
  return model.grid.h / (10.0 * static_cast<double>(model.grid.N));
}

// ---------------------------------------------------------------------------

struct Stepper::Impl {
  const RiserModel* model;
  SchemeConfig scheme;
  SourceTerm source;
  AccelerationOperator op;
  std::size_t N;

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;
  Eigen::VectorXd rhs;
  Eigen::VectorXd sol;

  std::vector<double> lin0, affine1, forces, vbar, vguess, base, src0, src1;
  // RK4 stages
  std::vector<double> us, vs, ku[4], kv[4];

  Impl(const RiserModel& m, const SchemeConfig& s, SourceTerm src)
      : model(&m), scheme(s), source(std::move(src)), op(m), N(m.grid.N) {
    const std::size_t n = N + 1;
    for (auto* w : {&lin0, &affine1, &forces, &vbar, &vguess, &base, &src0, &src1, &us, &vs}) {
      w->assign(n, 0.0);
    }
    for (int j = 0; j < 4; ++j) {
      ku[j].assign(n, 0.0);
      kv[j].assign(n, 0.0);
    }
  }

  // S = I + dt^2/4 K, where -K is the homogeneous linear operator on interior
  // nodes. Columns are obtained by applying the operator to unit vectors so the
  // matrix cannot drift from the stencils.
  void factor(double dt) {
    const std::size_t n = N - 1;
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(5 * n);
    std::vector<double> e(N + 1, 0.0);
    std::vector<double> col(N + 1, 0.0);
    for (std::size_t j = 1; j < N; ++j) {
      e[j] = 1.0;
      op.linear(e, 0.0, col);
      e[j] = 0.0;
      for (std::size_t i = 1; i < N; ++i) {
        const double kij = -col[i];
        const double sij = (i == j ? 1.0 : 0.0) + 0.25 * dt * dt * kij;
        if (sij != 0.0) trips.emplace_back(static_cast<int>(i - 1), static_cast<int>(j - 1), sij);
      }
    }
    Eigen::SparseMatrix<double> S(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    S.setFromTriplets(trips.begin(), trips.end());
    solver.compute(S);
    if (solver.info() != Eigen::Success) {
      throw Error(ErrorCode::Diverged, "implicit Newmark matrix could not be factored");
    }
    rhs.resize(static_cast<Eigen::Index>(n));
  }

  void add_source(double t, std::vector<double>& out) {
    if (source) {
      source(t, out);
    } else {
      std::fill(out.begin(), out.end(), 0.0);
    }
  }

  int newmark(FieldState& st, double t1, double dt) {
    const auto& drive = model->drive;
    const DriveSample bc0 = evaluate_drive(drive, st.t);
    const DriveSample bc1 = evaluate_drive(drive, t1);

    op.linear(st.u, bc0.alpha, lin0);
    std::vector<double>& boundary_only = vbar;
    std::fill(boundary_only.begin(), boundary_only.end(), 0.0);
    boundary_only[N] = bc1.phi;
    op.linear(boundary_only, bc1.alpha, affine1);
    add_source(st.t, src0);
    add_source(t1, src1);

    const double q = 0.25 * dt * dt;
    for (std::size_t i = 1; i < N; ++i) {
      base[i] = st.u[i] + dt * st.v[i] + q * (lin0[i] + affine1[i] + src0[i] + src1[i]);
    }

    // Explicit predictor for v^{n+1}.
    op.velocity_forces(st.v, model->drag.value(st.t), forces);
    for (std::size_t i = 1; i < N; ++i) vguess[i] = st.v[i] + dt * (lin0[i] - forces[i] + src0[i]);
    vguess[0] = 0.0;
    vguess[N] = bc1.phi_t;

    const double b_mid = model->drag.value(st.t + 0.5 * dt);
    std::vector<double> u_new(N + 1), v_new(N + 1);
    for (int it = 1; it <= scheme.picard_max_iters; ++it) {
      for (std::size_t i = 0; i <= N; ++i) vbar[i] = 0.5 * (st.v[i] + vguess[i]);
      op.velocity_forces(vbar, b_mid, forces);
      for (std::size_t i = 1; i < N; ++i) {
        rhs[static_cast<Eigen::Index>(i - 1)] = base[i] - 2.0 * q * forces[i];
      }
      sol = solver.solve(rhs);

      double diff = 0.0;
      double scale = 0.0;
      double umax = std::abs(bc1.phi);
      for (std::size_t i = 1; i < N; ++i) {
        u_new[i] = sol[static_cast<Eigen::Index>(i - 1)];
        v_new[i] = 2.0 * (u_new[i] - st.u[i]) / dt - st.v[i];
        diff = std::max(diff, std::abs(v_new[i] - vguess[i]));
        scale = std::max({scale, std::abs(v_new[i]), std::abs(st.v[i])});
        umax = std::max(umax, std::abs(u_new[i]));
        vguess[i] = v_new[i];
      }
      // v is recovered from a difference of displacements, so its rounding
      // noise is about eps * |u| / dt; no iteration can go below that.
      const double noise = 1e3 * std::numeric_limits<double>::epsilon() * umax / std::abs(dt);
      if (!std::isfinite(diff)) {
        throw Error(ErrorCode::Diverged, "non-finite velocity during Picard iteration");
      }
      if (diff <= scheme.picard_tol * scale + noise) {
        u_new[0] = 0.0;
        v_new[0] = 0.0;
        u_new[N] = bc1.phi;
        v_new[N] = bc1.phi_t;
        st.u.swap(u_new);
        st.v.swap(v_new);
        st.t = t1;
        return it;
      }
    }
    throw Error(ErrorCode::PicardStalled,
                fmt::format("Picard iteration did not reach tolerance {} in {} iterations",
                            scheme.picard_tol, scheme.picard_max_iters));
  }

  void rk4_stage(double t, std::span<const double> u, std::span<const double> v,
                 std::vector<double>& du, std::vector<double>& dv) {
    const DriveSample bc = evaluate_drive(model->drive, t);
    std::copy(u.begin(), u.end(), us.begin());
    std::copy(v.begin(), v.end(), vs.begin());
    us[0] = 0.0;
    vs[0] = 0.0;
    us[N] = bc.phi;
    vs[N] = bc.phi_t;
    op(us, vs, t, bc, dv);
    if (source) {
      add_source(t, src0);
      for (std::size_t i = 1; i < N; ++i) dv[i] += src0[i];
    }
    for (std::size_t i = 0; i <= N; ++i) du[i] = vs[i];
  }

  void rk4(FieldState& st, double t1, double dt) {
    const double t0 = st.t;
    std::vector<double> ut(N + 1), vt(N + 1);
    rk4_stage(t0, st.u, st.v, ku[0], kv[0]);
    const double c[3] = {0.5 * dt, 0.5 * dt, dt};
    const double ts[3] = {t0 + 0.5 * dt, t0 + 0.5 * dt, t1};
    for (int s = 0; s < 3; ++s) {
      for (std::size_t i = 0; i <= N; ++i) {
        ut[i] = st.u[i] + c[s] * ku[s][i];
        vt[i] = st.v[i] + c[s] * kv[s][i];
      }
      rk4_stage(ts[s], ut, vt, ku[s + 1], kv[s + 1]);
    }
    for (std::size_t i = 1; i < N; ++i) {
      st.u[i] += dt / 6.0 * (ku[0][i] + 2.0 * ku[1][i] + 2.0 * ku[2][i] + ku[3][i]);
      st.v[i] += dt / 6.0 * (kv[0][i] + 2.0 * kv[1][i] + 2.0 * kv[2][i] + kv[3][i]);
    }
    apply_boundary(st, evaluate_drive(model->drive, t1));
    st.t = t1;
  }
};

Stepper::Stepper(const RiserModel& model, const SchemeConfig& scheme, double dt, SourceTerm source)
    : impl_(std::make_unique<Impl>(model, scheme, std::move(source))), dt_(dt) {
  if (!(std::isfinite(dt) && dt != 0.0)) {
    throw Error(ErrorCode::InvalidArgument, fmt::format("time step must be finite and nonzero, got {}", dt));
  }
  if (scheme.scheme == Scheme::Newmark) {
    if (!(scheme.picard_tol > 0.0)) {
      throw Error(ErrorCode::InvalidArgument, "picard_tol must be positive");
    }
    impl_->factor(dt);
  } else if (!(dt > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "explicit scheme needs dt > 0");
  }
}

Stepper::~Stepper() = default;
Stepper::Stepper(Stepper&&) noexcept = default;
Stepper& Stepper::operator=(Stepper&&) noexcept = default;

void Stepper::advance(FieldState& state, double t_next) {
  try {
    if (impl_->scheme.scheme == Scheme::Newmark) {
      last_iterations_ = impl_->newmark(state, t_next, dt_);
    } else {
      impl_->rk4(state, t_next, dt_);
      last_iterations_ = 1;
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NonFinite) throw Error(ErrorCode::Diverged, e.what());
    throw;
  }
  for (std::size_t i = 0; i < state.u.size(); ++i) {
    if (!std::isfinite(state.u[i]) || !std::isfinite(state.v[i])) {
      throw Error(ErrorCode::Diverged, fmt::format("state became non-finite at node {}", i));
    }
  }
}

FieldState step(const FieldState& state, double dt, const SchemeConfig& scheme,
                const RiserModel& model) {
  Stepper stepper(model, scheme, dt);
  FieldState next = state;
  stepper.advance(next);
  return next;
}

// ---------------------------------------------------------------------------
// Checkpoint I/O

namespace {

constexpr char kMagic[8] = {'R', 'I', 'S', 'E', 'R', 'C', 'K', 'P'};

template <typename T>
void put_le(std::string& buf, T value) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
  U bits = std::bit_cast<U>(value);
  for (std::size_t b = 0; b < sizeof(U); ++b) {
    buf.push_back(static_cast<char>((bits >> (8 * b)) & 0xFFu));
  }
}

template <typename T>
T get_le(const std::string& buf, std::size_t& pos) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
  if (pos + sizeof(U) > buf.size()) throw Error(ErrorCode::Io, "checkpoint file is truncated");
  U bits = 0;
  for (std::size_t b = 0; b < sizeof(U); ++b) {
    bits |= static_cast<U>(static_cast<unsigned char>(buf[pos + b])) << (8 * b);
  }
  pos += sizeof(U);
  return std::bit_cast<T>(bits);
}

}  // namespace

void write_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  if (ckpt.u.size() != ckpt.N + 1 || ckpt.v.size() != ckpt.N + 1) {
    throw Error(ErrorCode::InvalidArgument, "checkpoint arrays must have N+1 entries");
  }
  std::string buf(kMagic, sizeof(kMagic));
  put_le(buf, ckpt.version);
  put_le(buf, static_cast<std::uint32_t>(ckpt.scheme));
  put_le(buf, ckpt.N);
  put_le(buf, ckpt.h);
  put_le(buf, ckpt.t);
  put_le(buf, ckpt.step);
  put_le(buf, ckpt.dt);
  for (double x : ckpt.u) put_le(buf, x);
  for (double x : ckpt.v) put_le(buf, x);

  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, fmt::format("cannot write checkpoint {}", tmp.string()));
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw Error(ErrorCode::Io, fmt::format("short write to {}", tmp.string()));
  }
  std::filesystem::rename(tmp, path);
}

Checkpoint read_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, fmt::format("cannot open checkpoint {}", path.string()));
  std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (buf.size() < sizeof(kMagic) || std::memcmp(buf.data(), kMagic, sizeof(kMagic)) != 0) {
    throw Error(ErrorCode::Io, fmt::format("{} is not a riser checkpoint", path.string()));
  }
  std::size_t pos = sizeof(kMagic);
  Checkpoint c;
  c.version = get_le<std::uint32_t>(buf, pos);
  if (c.version != Checkpoint::kVersion) {
    throw Error(ErrorCode::Io, fmt::format("unsupported checkpoint version {}", c.version));
  }
  const auto scheme = get_le<std::uint32_t>(buf, pos);
  if (scheme > 1) throw Error(ErrorCode::Io, fmt::format("unknown scheme id {}", scheme));
  c.scheme = static_cast<Scheme>(scheme);
  c.N = get_le<std::uint64_t>(buf, pos);
  c.h = get_le<double>(buf, pos);
  c.t = get_le<double>(buf, pos);
  c.step = get_le<std::uint64_t>(buf, pos);
  c.dt = get_le<double>(buf, pos);
  if (c.N > (buf.size() / 16)) throw Error(ErrorCode::Io, "checkpoint node count exceeds file size");
  c.u.resize(c.N + 1);
  c.v.resize(c.N + 1);
  for (auto& x : c.u) x = get_le<double>(buf, pos);
  for (auto& x : c.v) x = get_le<double>(buf, pos);
  if (pos != buf.size()) throw Error(ErrorCode::Io, "trailing bytes in checkpoint");
  return c;
}

// ---------------------------------------------------------------------------

TimeSeries run(const RiserModel& model, const SchemeConfig& scheme, const RunConfig& cfg,
               const FieldState& initial, double sigma, const RunHooks& hooks) {
  if (!(cfg.t_end >= 0.0) || !std::isfinite(cfg.t_end)) {
    throw Error(ErrorCode::InvalidArgument, "t_end must be finite and non-negative");
  }
  if (cfg.record_stride < 1 || cfg.checkpoint_stride < 0) {
    throw Error(ErrorCode::InvalidArgument, "record_stride must be >= 1 and checkpoint_stride >= 0");
  }
  const double dt_cfg = scheme.dt.value_or(auto_dt(scheme, model));
  if (!(dt_cfg > 0.0)) throw Error(ErrorCode::InvalidArgument, "dt must be positive");

  std::int64_t nsteps = 0;
  if (cfg.t_end > 0.0) {
    nsteps = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(cfg.t_end / dt_cfg - 1e-9)));
  }
  const double dt = nsteps > 0 ? cfg.t_end / static_cast<double>(nsteps) : dt_cfg;

  FieldState state = initial;
  std::int64_t first = 0;
  if (hooks.restart != nullptr) {
    const Checkpoint& c = *hooks.restart;
    if (c.N != model.grid.N || c.h != model.grid.h || c.scheme != scheme.scheme || c.dt != dt) {
      throw Error(ErrorCode::InvalidArgument,
                  "checkpoint does not match the scenario (N, h, scheme or dt differ)");
    }
    state.u = c.u;
    state.v = c.v;
    state.t = c.t;
    first = static_cast<std::int64_t>(c.step);
  }

  TimeSeries series;
  auto record = [&](const FieldState& s) {
    series.records.push_back(diagnose(s, model, sigma));
    if (hooks.on_record) hooks.on_record(series.records.back());
  };
  record(state);
  if (nsteps == 0 || first >= nsteps) return series;

  Stepper stepper(model, scheme, dt, hooks.source);
  log::debug("run: {} steps of dt = {} ({})", nsteps - first, dt, to_string(scheme.scheme));
  for (std::int64_t s = first + 1; s <= nsteps; ++s) {
    const double t_next = s == nsteps ? cfg.t_end : static_cast<double>(s) * dt;
    try {
      stepper.advance(state, t_next);
    } catch (const Error& e) {
      throw Error(e.code(), fmt::format("{} (step {}, t = {})", e.what(), s, t_next));
    }
    if (s % cfg.record_stride == 0 || s == nsteps) record(state);
    if (cfg.checkpoint_stride > 0 && s % cfg.checkpoint_stride == 0 &&
        !hooks.checkpoint_path.empty()) {
      write_checkpoint(hooks.checkpoint_path,
                       Checkpoint{Checkpoint::kVersion, scheme.scheme, model.grid.N, model.grid.h,
                                  state.t, static_cast<std::uint64_t>(s), dt, state.u, state.v});
    }
  }
  return series;
}

}  // namespace riser
