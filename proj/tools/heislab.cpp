// heislab: batch driver for the verification suites.
//
// Exit codes: 0 pass, 1 check failure, 2 usage or malformed input,
// 3 theorem hypothesis violated by the input.

#include "heislab/heislab.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

namespace {

enum ExitCode { kPass = 0, kCheckFailure = 1, kUsage = 2, kHypothesis = 3 };

std::uint64_t default_seed() {
  if (const char* env = std::getenv("HEISLAB_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw heislab::StructuralError(std::string("HEISLAB_SEED is not an unsigned integer: ") + env);
    }
  }
  return 1;
}

struct Common {
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string out;
  bool include_bases = false;
  std::string csv;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "RNG seed (default: $HEISLAB_SEED or 1)")->each([&c](const std::string&) {
    c.seed_given = true;
  });
  cmd->add_option("--out", c.out, "write the JSON report here instead of stdout");
  cmd->add_flag("--include-bases", c.include_bases, "include eigenspace bases in the report");
  cmd->add_option("--csv", c.csv, "directory for CSV exports of matrices and phase-space grids");
}

heislab::SuiteOptions options(const Common& c) {
  heislab::SuiteOptions o;
  o.seed = c.seed_given ? c.seed : default_seed();
  o.include_bases = c.include_bases;
  o.csv_dir = c.csv;
  return o;
}

int emit(const heislab::VerificationReport& rep, const Common& c) {
  const std::string text = rep.to_json().dump(2);
  if (c.out.empty()) {
    std::cout << text << "\n";
  } else {
    std::ofstream os(c.out);
    if (!os) throw heislab::StructuralError("cannot write " + c.out);
    os << text << "\n";
  }
  for (const auto& r : rep.records()) {
    if (!r.pass) std::cerr << "FAIL " << r.check_id << ": " << r.metric_value << " (tolerance " << r.tolerance << ")\n";
  }
  std::cerr << rep.suite() << ": " << (rep.pass() ? "PASS" : "FAIL") << "\n";
  return rep.pass() ? kPass : kCheckFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stone-von Neumann verification laboratory"};
  app.require_subcommand(1);

  Common common;
  std::string group = "Z4";
  std::string subgroup = "[]";
  heislab::GridSpec grid;
  int max_order = 16;
  int copies = 2;
  std::string input;

  auto* finite = app.add_subcommand("verify-finite", "finite group suite: eigenspaces, commutant, synthesis");
  finite->add_option("--group", group, "group spec, e.g. Z4xZ2")->required();
  finite->add_option("--subgroup", subgroup, "subgroup generators, e.g. [(2,0)]")->capture_default_str();
  add_common(finite, common);

  auto* real = app.add_subcommand("verify-real", "grid suite: Weyl operators, Fourier-Wigner, synthesis");
  real->add_option("--grid-n", grid.n, "spatial dimension (1 or 2)")->capture_default_str();
  real->add_option("--grid-N", grid.N, "points per axis (even)")->capture_default_str();
  real->add_option("--grid-h", grid.h, "grid step")->capture_default_str();
  add_common(real, common);

  heislab::GridSpec pgrid{1, 32, 0.25};
  std::string pgroup = "Z4", psub = "[2]";
  auto* product = app.add_subcommand("verify-product", "finite x grid suite: blocks and combined intertwiner");
  product->add_option("--group", pgroup, "group spec")->capture_default_str();
  product->add_option("--subgroup", psub, "subgroup generators")->capture_default_str();
  product->add_option("--grid-n", pgrid.n, "spatial dimension")->capture_default_str();
  product->add_option("--grid-N", pgrid.N, "points per axis")->capture_default_str();
  product->add_option("--grid-h", pgrid.h, "grid step")->capture_default_str();
  add_common(product, common);

  auto* duality = app.add_subcommand("duality", "double dual and annihilators over all small groups");
  duality->add_option("--max-order", max_order, "largest group order")->capture_default_str();
  add_common(duality, common);

  auto* decompose = app.add_subcommand("decompose", "decompose an action read from a representation file");
  decompose->add_option("input", input, "representation file")->required();
  decompose->add_option("--subgroup", subgroup, "subgroup generators")->capture_default_str();
  add_common(decompose, common);

  auto* fixture = app.add_subcommand("fixture", "write conjugated copies of the canonical action to a file");
  fixture->add_option("--group", group, "group spec")->required();
  fixture->add_option("--copies", copies, "number of copies")->capture_default_str();
  add_common(fixture, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*finite) {
      const auto e = heislab::parse_group(group);
      return emit(heislab::verify_finite(heislab::parse_subgroup(e, subgroup), options(common)), common);
    }
    if (*real) return emit(heislab::verify_real(grid, options(common)), common);
    if (*product) {
      const auto e = heislab::parse_group(pgroup);
      return emit(heislab::verify_product(heislab::parse_subgroup(e, psub), pgrid, options(common)), common);
    }
    if (*duality) return emit(heislab::verify_duality(max_order, options(common)), common);
    if (*decompose) {
      const auto file = heislab::read_representation_file(input);
      return emit(heislab::verify_decompose(file, heislab::parse_subgroup(file.group, subgroup), options(common)),
                  common);
    }
    if (*fixture) {
      const auto e = heislab::parse_group(group);
      const auto rho = heislab::conjugated_copies(e, copies, options(common).seed);
      if (common.out.empty()) {
        heislab::write_representation(std::cout, rho);
      } else {
        std::ofstream os(common.out);
        if (!os) throw heislab::StructuralError("cannot write " + common.out);
        heislab::write_representation(os, rho);
      }
      return kPass;
    }
  } catch (const heislab::HypothesisViolation& e) {
    std::cerr << "hypothesis violated: " << e.what() << "\n";
    return kHypothesis;
  } catch (const heislab::RepFormatError& e) {
    std::cerr << "malformed representation file: " << e.what() << "\n";
    return kUsage;
  } catch (const heislab::StructuralError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const heislab::InternalConsistencyError& e) {
    std::cerr << "internal consistency check failed: " << e.what() << "\n";
    return kCheckFailure;
  }
  return kUsage;
}
