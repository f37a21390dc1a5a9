// qla: command-line front end (run, verify, demo-lossy, inspect).
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "qla/config.hpp"
#include "qla/diagnostics.hpp"
#include "qla/dissipation.hpp"
#include "qla/driver.hpp"
#include "qla/snapshot.hpp"
#include "qla/verification.hpp"

namespace {

constexpr int kUsage = 2;

int cmd_run(const std::string& config_path, const std::string& output_dir, std::optional<long> steps) {
  if (!std::filesystem::exists(config_path)) {
    std::cerr << "qla run: config file not found: " << config_path << "\n";
    return kUsage;
  }
  qla::RunConfig cfg = qla::load_config(config_path);
  if (!output_dir.empty()) cfg.output_dir = output_dir;
  if (steps) {
    if (*steps < 0) throw qla::Error("--steps must be >= 0");
    cfg.steps = *steps;
  }
  const qla::SnapshotManifest m = qla::run(cfg);
  std::printf("run %s: %ld steps, %zu snapshots, max |relative energy drift| %.3e\n", m.run_id.c_str(), cfg.steps,
              m.snapshots.size(), m.max_relative_drift);
  std::printf("manifest: %s\n", (cfg.output_dir / "manifest.json").string().c_str());
  return 0;
}

int cmd_verify() {
  int failed = 0;
  for (const auto& c : qla::run_verification_suite()) {
    const char* tag = c.passed ? "PASS" : (c.informational ? "INFO" : "FAIL");
    std::printf("%-4s  %-62s %12.4g  (%s)\n", tag, c.name.c_str(), c.value, c.requirement.c_str());
    if (!c.passed && !c.informational) ++failed;
  }
  std::printf("%s\n", failed == 0 ? "verify: all checks passed" : "verify: FAILED");
  return failed == 0 ? 0 : 1;
}

int cmd_demo_lossy(double eps_r, double eps_i, double dt, long steps) {
  if (!(dt > 0.0) || steps < 0) throw qla::Error("demo-lossy needs dt > 0 and steps >= 0");
  const qla::LossyMedium1D medium{eps_r, eps_i, 1.0};
  medium.validate();
  std::printf("# loss_angle=%.6g v_delta=%.6g\n", medium.loss_angle(), medium.v_delta());
  std::printf("k,step,t,norm_trotter,norm_exact,p0,cumulative_p0\n");
  for (double k : {1.0, 2.0, 4.0}) {
    const qla::SplitHamiltonians s = qla::lossy_hamiltonians(medium, k);
    const qla::CMatrix exact = qla::exact_propagator(s, dt);
    qla::CVector trotter = qla::CVector::Zero(2), ref = qla::CVector::Zero(2), open = qla::CVector::Zero(2);
    trotter[0] = ref[0] = open[0] = 1.0;
    double cumulative = 1.0, p0 = 1.0;
    for (long n = 0; n <= steps; ++n) {
      std::printf("%g,%ld,%.10g,%.12g,%.12g,%.12g,%.12g\n", k, n, n * dt, trotter.norm(), ref.norm(), p0, cumulative);
      if (n == steps) break;
      trotter = qla::trotter_step(trotter, s, dt);
      ref = exact * ref;
      const qla::OpenStep o = qla::evolve_open(open, s, dt);
      open = o.state;
      p0 = o.p0;
      cumulative *= p0;
    }
  }
  return 0;
}

int cmd_inspect(const std::string& path, const std::string& config_path) {
  const qla::Snapshot snap = qla::read_snapshot(path);
  const qla::QubitField& f = snap.field;
  const qla::LatticeGrid& g = f.grid();
  std::printf("snapshot %s: %dx%d delta=%g step=%llu crc32=%08x\n", path.c_str(), g.nx, g.ny, g.delta,
              static_cast<unsigned long long>(snap.step), qla::stored_crc(path));
  for (int c = 0; c < qla::kComponents; ++c) {
    double lo = INFINITY, hi = -INFINITY;
    for (int y = 0; y < g.ny; ++y) {
      for (int x = 0; x < g.nx; ++x) {
        lo = std::min(lo, f.at(x, y, c));
        hi = std::max(hi, f.at(x, y, c));
      }
    }
    std::printf("q%d  min %+.6e  max %+.6e\n", c, lo, hi);
  }
  std::printf("energy %.12e\n", qla::energy(f));
  const double b = qla::peak_b(f);
  if (b > 0.0) {
    const auto r = qla::div_b(f, b);
    std::printf("max |div B| / max|B| %.3e at (%d, %d)\n", r.max_abs, r.x, r.y);
  }
  if (!config_path.empty()) {
    qla::RunConfig cfg = qla::load_config(config_path);
    const qla::RefractiveField media = qla::build_medium(cfg);
    if (!(media.grid.nx == g.nx && media.grid.ny == g.ny)) throw qla::Error("config grid does not match the snapshot");
    const double d = qla::peak_d(f, media);
    if (d > 0.0) {
      const auto r = qla::div_d(f, media, d);
      std::printf("max |div D| / max|D| %.3e at (%d, %d)\n", r.max_abs, r.x, r.y);
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Qubit lattice algorithm for 2D Maxwell equations in dielectric media"};
  app.require_subcommand(1);

  std::string config_path, output_dir;
  std::optional<long> steps;
  auto* run = app.add_subcommand("run", "run an experiment from a JSON config");
  run->add_option("--config", config_path, "config file")->required();
  run->add_option("--output-dir", output_dir, "override output_dir");
  run->add_option("--steps", steps, "override steps");

  auto* verify = app.add_subcommand("verify", "run the property checks");

  double eps_r = 2.0, eps_i = 0.2, dt = 0.01;
  long demo_steps = 200;
  auto* demo = app.add_subcommand("demo-lossy", "amplitude decay series of a lossy 1D medium (CSV on stdout)");
  demo->add_option("--eps-r", eps_r, "real permittivity")->capture_default_str();
  demo->add_option("--eps-i", eps_i, "imaginary permittivity")->capture_default_str();
  demo->add_option("--dt", dt, "time step")->capture_default_str();
  demo->add_option("--steps", demo_steps, "number of steps")->capture_default_str();

  std::string snapshot_path, inspect_config;
  auto* inspect = app.add_subcommand("inspect", "summarize a snapshot file");
  inspect->add_option("snapshot", snapshot_path, "snapshot file")->required();
  inspect->add_option("--config", inspect_config, "config of the run, for div D");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*run) return cmd_run(config_path, output_dir, steps);
    if (*verify) return cmd_verify();
    if (*demo) return cmd_demo_lossy(eps_r, eps_i, dt, demo_steps);
    if (*inspect) return cmd_inspect(snapshot_path, inspect_config);
  } catch (const std::exception& e) {
    std::cerr << "qla: " << e.what() << "\n";
    return 1;
  }
  return kUsage;
}
