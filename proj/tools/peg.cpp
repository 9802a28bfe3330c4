// peg: command-line front end for the square search.
//
// Exit codes: 0 success, 1 usage or input error, 2 mathematical failure.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <string>

#include "squarepeg/squarepeg.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kMathFailure = 2;

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw peg::InvalidInput("cannot write '" + path + "'");
  out << text;
}

void write_json(const std::string& path, const peg::json& doc) { write_text(path, doc.dump(2) + "\n"); }

// Loops of class (0,1) are turned a quarter turn so that the solver always
// sees class (1,0). Returns true when a rotation happened.
bool to_solver_frame(peg::Curve& c) {
  const peg::Complex per = peg::period(c);
  if (per == peg::Complex{1.0, 0.0}) return false;
  if (per != peg::Complex{0.0, 1.0}) throw peg::InvalidInput("curves must have period (1,0) or (0,1)");
  c = std::visit([](const auto& x) -> peg::Curve { return peg::rescale_to_torus(x, 1); }, c);
  return true;
}

peg::Winding parse_class(const std::string& s) {
  const auto comma = s.find(',');
  try {
    if (comma == std::string::npos) throw std::invalid_argument(s);
    std::size_t used = 0;
    const int u = std::stoi(s.substr(0, comma), &used);
    if (used != comma) throw std::invalid_argument(s);
    const std::string rest = s.substr(comma + 1);
    const int v = std::stoi(rest, &used);
    if (used != rest.size()) throw std::invalid_argument(s);
    return {u, v};
  } catch (const std::logic_error&) {
    throw peg::InvalidInput("class must look like 'u,v', got '" + s + "'");
  }
}

struct SolveArgs {
  std::string curves, out = "-", svg;
  int grid = 64;
  double tol = 1e-10;
};

int run_solve(const SolveArgs& a) {
  auto pair = peg::load_curve_pair(a.curves);
  const bool rf = to_solver_frame(pair.f);
  const bool rg = to_solver_frame(pair.g);
  if (rf != rg) throw peg::InvalidInput("both curves must have the same period");
  const auto torus = peg::Quotient::torus();
  if (!peg::is_embedded(pair.f, torus)) throw peg::InvalidInput("curve 0 is not embedded in the torus");
  if (!peg::is_embedded(pair.g, torus)) throw peg::InvalidInput("curve 1 is not embedded in the torus");
  const double gap = std::visit([&](const auto& f, const auto& g) { return peg::min_distance(f, g, torus); },
                                pair.f, pair.g);
  if (!(gap > 0.0)) throw peg::InvalidInput("curves not disjoint");

  peg::SolverConfig cfg;
  cfg.grid_resolution = a.grid;
  cfg.newton_tol = a.tol;
  cfg.validate();
  const auto sols = std::visit([&](const auto& f, const auto& g) { return peg::solve_all(f, g, cfg); }, pair.f, pair.g);
  write_json(a.out, peg::solve_report(sols, cfg, rf));
  if (!a.svg.empty()) {
    write_text(a.svg, std::visit([&](const auto& f, const auto& g) { return peg::solve_svg(f, g, sols); }, pair.f,
                                 pair.g));
  }
  return kOk;
}

int run_verify(double alpha, double beta, const std::string& out) {
  if (!std::isfinite(alpha) || !std::isfinite(beta)) throw peg::InvalidInput("alpha and beta must be finite");
  const auto r = peg::verify_model(alpha, beta);
  write_json(out, peg::to_json(r));
  return r.pass ? kOk : kMathFailure;
}

int run_count(const std::string& c1, double o1, const std::string& c2, double o2) {
  const peg::LinearCircle l1(parse_class(c1), o1), l2(parse_class(c2), o2);
  const int dim = peg::hf_dimension_linear(l1, l2);
  const auto w1 = l1.homology_class(), w2 = l2.homology_class();
  if (static_cast<long>(w1[0]) * w2[1] - static_cast<long>(w1[1]) * w2[0] != 0) {
    const int crossings = peg::geometric_intersection_count(l1, l2);
    if (crossings != dim) {
      std::cerr << "peg: determinant " << dim << " disagrees with " << crossings << " crossings\n";
      return kMathFailure;
    }
  }
  std::cout << dim << "\n";
  return kOk;
}

int run_pipeline(const std::string& curves, const std::string& out, const std::string& svg) {
  const auto pair = peg::load_curve_pair(curves);
  const auto* f = std::get_if<peg::PolylineCurve>(&pair.f);
  const auto* g = std::get_if<peg::PolylineCurve>(&pair.g);
  if (!f || !g) throw peg::InvalidInput("pipeline takes two polyline curves");
  const auto report = peg::run(*f, *g);
  write_json(out, peg::to_json(report));
  if (!svg.empty()) write_text(svg, peg::pipeline_svg(*f, *g, report));
  if (!report.converged) {
    std::cerr << "peg: refinement schedule exhausted without convergence\n";
    return kMathFailure;
  }
  return kOk;
}

int run_generate(std::uint64_t seed, const std::string& family, const std::string& out) {
  write_json(out, peg::to_json(peg::generate_fixture(family, seed)));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Inscribed squares between two periodic curves"};
  app.require_subcommand(1, 1);

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "Find all squares with two corners on each torus loop");
  s->add_option("--curves", solve.curves, "Curve pair JSON")->required();
  s->add_option("--grid", solve.grid, "Seeding grid resolution")->capture_default_str();
  s->add_option("--tol", solve.tol, "Newton residual tolerance")->capture_default_str();
  s->add_option("--out", solve.out, "Output JSON ('-' for stdout)")->capture_default_str();
  s->add_option("--svg", solve.svg, "Optional SVG plot");

  double alpha = 0.0, beta = 0.0;
  std::string verify_out = "-";
  auto* v = app.add_subcommand("verify", "Check the straight-loop model identities");
  v->add_option("--alpha", alpha)->required();
  v->add_option("--beta", beta)->required();
  v->add_option("--out", verify_out)->capture_default_str();

  std::string class1, class2;
  double offset1 = 0.0, offset2 = 0.0;
  auto* c = app.add_subcommand("count", "Intersection lower bound for two straight loops");
  c->add_option("--class1", class1, "u,v")->required();
  c->add_option("--offset1", offset1)->capture_default_str();
  c->add_option("--class2", class2, "u,v")->required();
  c->add_option("--offset2", offset2)->capture_default_str();

  std::string pipe_curves, pipe_out = "-", pipe_svg;
  auto* p = app.add_subcommand("pipeline", "Square inscribed in two vertical periodic polylines");
  p->add_option("--curves", pipe_curves)->required();
  p->add_option("--out", pipe_out)->capture_default_str();
  p->add_option("--svg", pipe_svg);

  std::uint64_t seed = 0;
  std::string family, gen_out = "-";
  auto* g = app.add_subcommand("generate", "Write a seeded curve pair");
  g->add_option("--seed", seed)->required();
  g->add_option("--family", family)->required()->check(CLI::IsMember(peg::fixture_families()));
  g->add_option("--out", gen_out)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*s) return run_solve(solve);
    if (*v) return run_verify(alpha, beta, verify_out);
    if (*c) return run_count(class1, offset1, class2, offset2);
    if (*p) return run_pipeline(pipe_curves, pipe_out, pipe_svg);
    if (*g) return run_generate(seed, family, gen_out);
  } catch (const peg::InvalidInput& e) {
    std::cerr << "peg: " << e.what() << "\n";
    return kInputError;
  } catch (const peg::Error& e) {
    std::cerr << "peg: " << e.what() << "\n";
    return kMathFailure;
  }
  return kInputError;
}
