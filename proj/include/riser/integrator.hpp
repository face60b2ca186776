#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "riser/diagnostics.hpp"
#include "riser/model.hpp"

namespace riser {

enum class Scheme : std::uint32_t { ExplicitRk4 = 0, Newmark = 1 };

std::string_view to_string(Scheme s);

struct SchemeConfig {
  Scheme scheme = Scheme::Newmark;
  std::optional<double> dt;  ///< nullopt means "auto"
  double picard_tol = 1e-10;
  int picard_max_iters = 50;
};

struct RunConfig {
  double t_end = 0.0;
  std::int64_t record_stride = 100;
  std::int64_t checkpoint_stride = 0;  ///< 0 disables checkpoints
};

/// Extra forcing f(z_i, t) written into `out` at every node; only interior
/// entries are used. Exists for manufactured-solution tests.
using SourceTerm = std::function<void(double t, std::span<double> out)>;

/// Explicit step bound 0.5 * min(dz^2/sqrt(k), dz/sqrt(a_max)).
double stable_dt(const Grid1D& grid, const Parameters& params, const TensionProfile& a);

/// dt used when the configuration says "auto".
double auto_dt(const SchemeConfig& scheme, const RiserModel& model);

/// Advances one riser by a fixed step.
///
/// Newmark (beta = 1/4, gamma = 1/2): the linear bending and tension terms are
/// averaged between the two time levels and solved implicitly; the Coriolis
/// and drag forces are evaluated at the mid-step velocity (v^n + v^{n+1})/2 and
/// resolved by Picard iteration. Mid-step evaluation makes the discrete energy
/// change exactly -dt * (drag work) when the boundary is at rest.
class Stepper {
 public:
  Stepper(const RiserModel& model, const SchemeConfig& scheme, double dt, SourceTerm source = {});
  ~Stepper();
  Stepper(Stepper&&) noexcept;
  Stepper& operator=(Stepper&&) noexcept;

  /// Advance `state` from state.t to t_next (t_next - state.t must equal dt()).
  void advance(FieldState& state, double t_next);
  void advance(FieldState& state) { advance(state, state.t + dt_); }

  double dt() const { return dt_; }
  int last_iterations() const { return last_iterations_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  double dt_;
  int last_iterations_ = 0;
};

/// One step of size dt from `state`. Rebuilds the solver; prefer Stepper in loops.
FieldState step(const FieldState& state, double dt, const SchemeConfig& scheme,
                const RiserModel& model);

/// Binary restart file. Little-endian throughout:
///   char[8] magic "RISERCKP", u32 version, u32 scheme id, u64 N, f64 h,
///   f64 t, u64 step, f64 dt, f64 u[N+1], f64 v[N+1]
struct Checkpoint {
  static constexpr std::uint32_t kVersion = 1;
  std::uint32_t version = kVersion;
  Scheme scheme = Scheme::Newmark;
  std::uint64_t N = 0;
  double h = 0.0;
  double t = 0.0;
  std::uint64_t step = 0;
  double dt = 0.0;
  std::vector<double> u;
  std::vector<double> v;
};

void write_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint read_checkpoint(const std::filesystem::path& path);

struct RunHooks {
  std::function<void(const DiagnosticsRecord&)> on_record;
  std::filesystem::path checkpoint_path;
  const Checkpoint* restart = nullptr;
  SourceTerm source;
};

/// Integrates to t_end with a fixed step (t_end divided into a whole number
/// of steps no larger than the configured dt). Records the initial state,
/// every record_stride-th step, and the final step.
/// Step errors are rethrown with the failing time in the message.
TimeSeries run(const RiserModel& model, const SchemeConfig& scheme, const RunConfig& cfg,
               const FieldState& initial, double sigma, const RunHooks& hooks = {});

}  // namespace riser
