#pragma once

// `implicit` command-line driver. Kept in a header so the test suites can call
// run() in-process with string streams.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mgimpl/engine.hpp"
#include "mgimpl/io/fixtures.hpp"
#include "mgimpl/io/map_file.hpp"

namespace implicit_cli {

enum ExitCode : int {
  kOk = 0,
  kInputError = 1,
  kFlagError = 2,
  kNoPositiveGrading = 3,
  kInvariantViolation = 4,
};

struct RunOptions {
  std::string map_path;
  std::int64_t max_degree = 2;
  unsigned threads = 0;
  std::uint64_t seed = 1;
  std::uint64_t prime = mgimpl::PrimeField::kDefaultPrime;
  bool no_skip = false;
  bool no_trim = false;
  bool no_prescreen = false;
  bool naive = false;
  std::string output = "text";
  std::string grading_out;
  std::string report_path;
};

inline std::string beta_string(const mgimpl::IntVector& beta) {
  std::string s = "(";
  for (std::size_t k = 0; k < beta.size(); ++k) {
    if (k) s += ",";
    s += std::to_string(beta[k]);
  }
  return s + ")";
}

/// Generators as text, one `# degree i, multidegree beta` header per group.
inline void write_generators_text(std::ostream& os, const mgimpl::RingMap& phi, const mgimpl::KernelResult& res) {
  const mgimpl::Generator* prev = nullptr;
  for (const auto& g : res.generators.generators) {
    if (!prev || prev->degree != g.degree || prev->beta != g.beta) {
      os << "# degree " << g.degree << ", multidegree " << beta_string(g.beta) << "\n";
    }
    os << mgimpl::to_string(g.poly, phi.domain_names()) << "\n";
    prev = &g;
  }
}

inline nlohmann::json generators_json(const mgimpl::RingMap& phi, const mgimpl::KernelResult& res) {
  nlohmann::json groups = nlohmann::json::array();
  const mgimpl::Generator* prev = nullptr;
  for (const auto& g : res.generators.generators) {
    if (!prev || prev->degree != g.degree || prev->beta != g.beta) {
      groups.push_back({{"degree", g.degree}, {"multidegree", g.beta}, {"generators", nlohmann::json::array()}});
    }
    groups.back()["generators"].push_back(mgimpl::io::terms_to_json(g.poly, phi.domain_names()));
    prev = &g;
  }
  return groups;
}

inline nlohmann::json report_json(const RunOptions& o, const mgimpl::KernelResult& res) {
  nlohmann::json levels = nlohmann::json::array();
  for (const auto& l : res.levels) {
    levels.push_back({{"degree", l.degree},
                      {"monomials", l.monomials},
                      {"multidegrees", l.multidegrees},
                      {"skipped_matroid", l.skipped_matroid},
                      {"skipped_prescreen", l.skipped_prescreen},
                      {"solved", l.solved},
                      {"generators", l.generators},
                      {"seconds", l.seconds}});
  }
  return {{"levels", levels},
          {"grading_rank", res.grading.rank()},
          {"positive_weight", res.grading.positive_weight ? nlohmann::json(*res.grading.positive_weight) : nlohmann::json()},
          {"jacobian_prime", res.jacobian_prime},
          {"options",
           {{"max_degree", o.max_degree},
            {"threads", o.threads},
            {"seed", o.seed},
            {"prime", o.prime},
            {"skip", !o.no_skip},
            {"trim", !o.no_trim},
            {"prescreen", !o.no_prescreen},
            {"naive", o.naive}}}};
}

inline void write_report_table(std::ostream& os, const mgimpl::KernelResult& res) {
  os << "grading rank " << res.grading.rank() << "\n";
  os << std::setw(6) << "degree" << std::setw(12) << "monomials" << std::setw(14) << "multidegrees" << std::setw(10)
     << "skipped" << std::setw(12) << "prescreened" << std::setw(8) << "solved" << std::setw(10) << "min.gens"
     << std::setw(11) << "seconds" << "\n";
  for (const auto& l : res.levels) {
    os << std::setw(6) << l.degree << std::setw(12) << l.monomials << std::setw(14) << l.multidegrees << std::setw(10)
       << l.skipped_matroid << std::setw(12) << l.skipped_prescreen << std::setw(8) << l.solved << std::setw(10)
       << l.generators << std::setw(11) << std::fixed << std::setprecision(3) << l.seconds << "\n";
  }
}

inline int execute(const RunOptions& o, std::istream& in, std::ostream& out, std::ostream& err) {
  std::optional<mgimpl::RingMap> phi;
  try {
    if (o.map_path.empty() || o.map_path == "-") {
      std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
      phi = mgimpl::io::parse_map(content, "<stdin>");
    } else {
      phi = mgimpl::io::parse_map_file(o.map_path);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }

  try {
    mgimpl::PrimeField check(o.prime);
    (void)check;
  } catch (const std::exception& e) {
    err << "error: --prime: " << e.what() << "\n";
    return kFlagError;
  }

  mgimpl::KernelResult res;
  try {
    if (o.naive) {
      res = mgimpl::naive_total_degree_kernel(*phi, o.max_degree, 5000, o.threads);
    } else {
      mgimpl::EngineOptions eo;
      eo.max_degree = o.max_degree;
      eo.threads = o.threads;
      eo.seed = o.seed;
      eo.prime = o.prime;
      eo.skip = !o.no_skip;
      eo.trim = !o.no_trim;
      eo.prescreen = !o.no_prescreen;
      res = mgimpl::components_of_kernel(*phi, eo);
    }
  } catch (const mgimpl::NoPositiveGrading& e) {
    err << "error: " << e.what() << "\n";
    return kNoPositiveGrading;
  } catch (const mgimpl::InvariantViolation& e) {
    err << "internal error: " << e.what() << "\n";
    return kInvariantViolation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }

  const auto problems = mgimpl::check_result(*phi, res);
  if (!problems.empty()) {
    for (const auto& p : problems) err << "internal error: " << p << "\n";
    return kInvariantViolation;
  }

  if (o.output == "json") {
    out << generators_json(*phi, res).dump(2) << "\n";
  } else {
    write_generators_text(out, *phi, res);
  }

  if (!o.grading_out.empty()) {
    std::ofstream g(o.grading_out);
    if (!g) {
      err << "error: cannot write " << o.grading_out << "\n";
      return kInputError;
    }
    mgimpl::write_grading(g, res.grading.domain);
  }
  write_report_table(err, res);
  if (!o.report_path.empty()) {
    std::ofstream r(o.report_path);
    if (!r) {
      err << "error: cannot write " << o.report_path << "\n";
      return kInputError;
    }
    r << report_json(o, res).dump(2) << "\n";
  }
  return kOk;
}

inline int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Minimal generators of the kernel of a polynomial ring map, degree by degree", "implicit"};
  app.require_subcommand(1);

  RunOptions o;
  auto* run_cmd = app.add_subcommand("run", "compute kernel generators up to a degree bound");
  run_cmd->add_option("--map", o.map_path, "map file (.map text or JSON); stdin when omitted");
  run_cmd->add_option("-d,--max-degree", o.max_degree, "bound on the weighted degree a.alpha")
      ->check(CLI::PositiveNumber);
  run_cmd->add_option("--threads", o.threads, "worker threads, 0 = all cores");
  run_cmd->add_option("--seed", o.seed, "seed for the Jacobian evaluation point");
  run_cmd->add_option("--prime", o.prime, "prime for the Jacobian and the prescreen");
  run_cmd->add_flag("--no-skip", o.no_skip, "disable the algebraic matroid skip");
  run_cmd->add_flag("--no-trim", o.no_trim, "disable trimming against lower-degree generators");
  run_cmd->add_flag("--no-prescreen", o.no_prescreen, "disable the modular rank prescreen");
  run_cmd->add_flag("--naive", o.naive, "one matrix per total degree instead of per multidegree");
  run_cmd->add_option("--output", o.output, "generator output format")->check(CLI::IsMember({"text", "json"}));
  run_cmd->add_option("--grading-out", o.grading_out, "write the grading matrix to PATH");
  run_cmd->add_option("--report", o.report_path, "write the run report as JSON to PATH");

  std::string format = "text";
  std::size_t grass_n = 4;
  auto* ex_cmd = app.add_subcommand("examples", "print a built-in map file");
  ex_cmd->require_subcommand(1);
  ex_cmd->add_option("--format", format, "map file format")->check(CLI::IsMember({"text", "json"}));
  auto* ex_grass = ex_cmd->add_subcommand("grassmannian", "Pluecker embedding of Gr(2,N)");
  ex_grass->add_option("N", grass_n, "number of columns (>= 4)")->required()->check(CLI::Range(4, 64));
  auto* ex_cusp = ex_cmd->add_subcommand("cusp", "(a+b)^2, a^2-b^2, (a-b)^2");
  auto* ex_sunlet = ex_cmd->add_subcommand("sunlet-k3p", "K3P model on the 4-leaf sunlet network");
  (void)ex_cusp;

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kFlagError;
  }

  if (*ex_cmd) {
    mgimpl::RingMap phi = *ex_grass ? mgimpl::io::gen_grassmannian(grass_n)
                          : *ex_sunlet ? mgimpl::io::gen_sunlet_k3p()
                                       : mgimpl::io::gen_cusp();
    out << (format == "json" ? mgimpl::io::emit_map_json(phi) : mgimpl::io::emit_map_text(phi));
    return kOk;
  }
  return execute(o, in, out, err);
}

inline int run(int argc, char** argv, std::istream& in, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, in, out, err);
}

}  // namespace implicit_cli
