#include <cstdint>
#include <cstdio>
#include <functional>
#include <string>

#include "CLI11.hpp"

#include "cheb/driver.hpp"
#include "cheb/instance_io.hpp"
#include "cheb/presets.hpp"

namespace {

// Reports go to --out when given, otherwise to stdout. The trailing notice
// is chatter and obeys --quiet; the report itself is the product and is
// always emitted somewhere.
void emit(const std::string& text, const std::string& out_path, bool quiet) {
  if (out_path.empty()) {
    std::fputs(text.c_str(), stdout);
    return;
  }
  cheb::write_text_file(out_path, text);
  if (!quiet) std::printf("wrote %s\n", out_path.c_str());
}

struct LocalArgs {
  std::string instance;
  std::string method = "auto";
  double tol = 1e-6;
  std::int64_t samples = 0;
  int restarts = 10;
  std::uint64_t seed = 1;
  std::string out;
  bool quiet = false;
  bool no_timings = false;
};

struct GlobalArgs {
  std::string instance;
  std::int64_t samples = 0;
  std::uint64_t seed = 1;
  std::string out;
  bool quiet = false;
  bool no_timings = false;
};

struct VerifyArgs {
  std::string instance;
  std::int64_t samples = 100000;
  int restarts = 50;
  std::uint64_t seed = 1;
  std::string out;
  bool quiet = false;
};

struct GenArgs {
  std::string preset;
  std::int64_t dim = 2;
  std::int64_t m = 1;
  std::uint64_t seed = 1;
  std::string out;
  bool quiet = false;
};

int do_local(const LocalArgs& a) {
  const cheb::ProblemInstance inst = cheb::load_instance(a.instance);
  cheb::RunOptions opt;
  opt.method = a.method;
  opt.tol = a.tol;
  opt.samples = a.samples;
  opt.restarts = a.restarts;
  opt.seed = a.seed;
  opt.with_timings = !a.no_timings;
  const cheb::ResultDocument doc = cheb::run_local(inst, opt);
  emit(cheb::result_to_json(doc), a.out, a.quiet);
  if (!a.quiet && !a.out.empty())
    std::printf("method=%s radius=%.17g lub=%.17g\n", doc.method_used.c_str(),
                doc.radius, doc.lub);
  return 0;
}

int do_global(const GlobalArgs& a) {
  const cheb::ProblemInstance inst = cheb::load_instance(a.instance);
  cheb::RunOptions opt;
  opt.samples = a.samples;
  opt.seed = a.seed;
  opt.with_timings = !a.no_timings;
  const cheb::GlobalDocument doc = cheb::run_global(inst, opt);
  emit(cheb::global_to_json(doc), a.out, a.quiet);
  if (!a.quiet && !a.out.empty())
    std::printf("tau_sharp=%.17g sdp_value=%.17g\n", doc.tau_sharp,
                doc.sdp_value);
  return 0;
}

int do_verify(const VerifyArgs& a) {
  const cheb::ProblemInstance inst = cheb::load_instance(a.instance);
  cheb::RunOptions opt;
  opt.samples = a.samples;
  opt.restarts = a.restarts;
  opt.seed = a.seed;
  const cheb::VerifyDocument doc = cheb::run_verify(inst, opt);
  emit(cheb::verify_to_json(doc), a.out, a.quiet);
  if (!doc.passed) {
    for (const cheb::CheckResult& c : doc.checks)
      if (!c.passed)
        std::fprintf(stderr, "check failed: %s (measured %.17g, bound %.17g)\n",
                     c.name.c_str(), c.measured, c.bound);
    return 4;
  }
  if (!a.quiet && !a.out.empty()) std::printf("all checks passed\n");
  return 0;
}

int do_gen(const GenArgs& a, bool m_given) {
  cheb::ProblemInstance inst;
  const auto dim = static_cast<Eigen::Index>(a.dim);
  const auto m = static_cast<Eigen::Index>(a.m);
  if (a.preset == "rectangle") {
    inst = cheb::rectangle_instance(dim, m, 1.0, 1.0, cheb::Vector::Zero(m));
  } else if (a.preset == "ball-in-slab") {
    if (m_given && m != dim)
      throw cheb::ValidationError("gen: ball-in-slab observes everything, m equals dim");
    cheb::Vector y = cheb::Vector::Zero(dim);
    y(0) = 0.5;
    inst = cheb::ball_in_slab_instance(dim, 2.0, 1.0, y);
  } else if (a.preset == "random-specific") {
    inst = cheb::random_specific(dim, m, a.seed);
  } else {
    inst = cheb::random_general(dim, m, a.seed);
  }
  emit(cheb::instance_to_json(inst), a.out, a.quiet);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chebyshev-center solver for two-ellipsoid recovery problems"};
  app.require_subcommand(1);

  LocalArgs local_args;
  GlobalArgs global_args;
  VerifyArgs verify_args;
  GenArgs gen_args;
  std::function<int()> action;

  CLI::App* local =
      app.add_subcommand("local", "center and radius for one data vector");
  local->add_option("--instance", local_args.instance, "instance JSON file")
      ->required();
  local->add_option("--method", local_args.method,
                    "auto | impeq | sdp | both (default auto)")
      ->check(CLI::IsMember({"auto", "impeq", "sdp", "both"}));
  local->add_option("--tol", local_args.tol,
                    "route agreement tolerance for --method both");
  local->add_option("--samples", local_args.samples,
                    "oracle samples at the computed center (0 = off)");
  local->add_option("--restarts", local_args.restarts,
                    "ascent restarts for the oracle");
  local->add_option("--seed", local_args.seed, "rng seed");
  local->add_option("--out", local_args.out, "write the report here");
  local->add_flag("--quiet", local_args.quiet, "suppress notices");
  local->add_flag("--no-timings", local_args.no_timings,
                  "omit timings for byte-reproducible reports");
  local->callback([&] { action = [&] { return do_local(local_args); }; });

  CLI::App* global =
      app.add_subcommand("global", "globally optimal linear recovery map");
  global->add_option("--instance", global_args.instance, "instance JSON file")
      ->required();
  global->add_option("--samples", global_args.samples,
                     "worst-case-error samples for the map (0 = off)");
  global->add_option("--seed", global_args.seed, "rng seed");
  global->add_option("--out", global_args.out, "write the report here");
  global->add_flag("--quiet", global_args.quiet, "suppress notices");
  global->add_flag("--no-timings", global_args.no_timings,
                   "omit timings for byte-reproducible reports");
  global->callback([&] { action = [&] { return do_global(global_args); }; });

  CLI::App* verify =
      app.add_subcommand("verify", "run the invariant checks on an instance");
  verify->add_option("--instance", verify_args.instance, "instance JSON file")
      ->required();
  verify->add_option("--samples", verify_args.samples,
                     "sampling budget for the sandwich checks");
  verify->add_option("--restarts", verify_args.restarts, "ascent restarts");
  verify->add_option("--seed", verify_args.seed, "rng seed");
  verify->add_option("--out", verify_args.out, "write the report here");
  verify->add_flag("--quiet", verify_args.quiet, "suppress notices");
  verify->callback([&] { action = [&] { return do_verify(verify_args); }; });

  CLI::App* gen = app.add_subcommand("gen", "write an instance file");
  gen->add_option("--preset", gen_args.preset,
                  "rectangle | ball-in-slab | random-specific | random-general")
      ->required()
      ->check(CLI::IsMember(
          {"rectangle", "ball-in-slab", "random-specific", "random-general"}));
  gen->add_option("--dim", gen_args.dim, "ambient dimension (>= 2)");
  CLI::Option* m_opt = gen->add_option("--m", gen_args.m, "observation count");
  gen->add_option("--seed", gen_args.seed, "rng seed");
  gen->add_option("--out", gen_args.out, "write the instance here");
  gen->add_flag("--quiet", gen_args.quiet, "suppress notices");
  gen->callback([&] {
    action = [&, m_given = m_opt->count() > 0] {
      return do_gen(gen_args, m_given);
    };
  });

  CLI11_PARSE(app, argc, argv);
  if (!action) return 0;

  try {
    return action();
  } catch (const cheb::ValidationError& e) {
    std::fprintf(stderr, "validation error: %s\n", e.what());
    return 2;
  } catch (const cheb::IoError& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return 2;
  } catch (const cheb::SolverError& e) {
    std::fprintf(stderr, "solver error: %s\n", e.what());
    return 3;
  } catch (const cheb::NumericalError& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
