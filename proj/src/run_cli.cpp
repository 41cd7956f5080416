#include <CLI11.hpp>
#include <cstdlib>

#include "tensordec/cli.hpp"

namespace tensordec {

namespace {

void add_common(CLI::App* cmd, JobConfig& cfg) {
  cmd->add_option("--field", cfg.field, "prime characteristic or Q");
  cmd->add_option("--seed", cfg.seed, "PRNG seed for all randomized choices");
  cmd->add_option("--chart-retries", cfg.chart_retries, "affine chart retries");
  cmd->add_option("--time-limit", cfg.time_limit, "wall-clock budget in seconds (0 = none)");
  cmd->add_option("--output,-o", cfg.output, "output path or - for stdout");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"exact rank-one decompositions of symmetric and mixed tensors"};
  app.name("tensordec");
  app.set_help_flag("--help", "print usage");  // keep -h free: --h is the rank flag
  app.require_subcommand(1);
  JobConfig cfg;
  if (const char* envf = std::getenv("TENSORDEC_FIELD")) cfg.field = envf;

  auto* gen = app.add_subcommand("gen", "generate a seeded instance of prescribed rank");
  add_common(gen, cfg);
  gen->add_option("--n", cfg.n, "projective dimension (n+1 variables)");
  gen->add_option("--d", cfg.d, "degree");
  gen->add_option("--h", cfg.h, "rank of the generated instance");
  gen->add_option("--dims", cfg.dims, "projective dimensions per factor (mixed)")
      ->delimiter(',');
  gen->add_option("--degrees", cfg.degrees, "degrees per factor (mixed)")->delimiter(',');

  auto* dec = app.add_subcommand("decompose", "compute a rank-one decomposition");
  add_common(dec, cfg);
  dec->add_option("--method", cfg.method,
                  "auto|catalecticant|generalized|hilbert|lift|vsp|mixed");
  dec->add_option("--h", cfg.h, "decomposition length");
  dec->add_option("--s", cfg.s, "derivative order override");
  dec->add_option("--spec", cfg.spec_a, "flattening a-part a1,..,ap (mixed)")->delimiter(',');
  dec->add_option("--input,-i,input", cfg.input, "input path or - for stdin");

  auto* idf = app.add_subcommand("identify", "evaluate the identifiability certificate");
  add_common(idf, cfg);
  idf->add_option("--h", cfg.h, "candidate rank");
  idf->add_option("--s", cfg.s, "derivative order override");
  idf->add_option("--spec", cfg.spec_a, "flattening a-part a1,..,ap (mixed)")->delimiter(',');
  idf->add_option("--input,-i,input", cfg.input, "input path or - for stdin");

  auto* ver = app.add_subcommand("verify", "re-check a decomposition against its input");
  add_common(ver, cfg);
  ver->add_option("--input,-i,input", cfg.input,
                  "JSON with 'target' and 'decomposition' (path or -)");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return EXIT_OK;
  } catch (const CLI::ParseError& e) {
    err << "argument error: " << e.what() << "\n";
    return EXIT_PARSE;
  }
  std::string cmd = app.get_subcommands().front()->get_name();

  try {
    if (cfg.field == "Q" || cfg.field == "q" || cfg.field == "QQ") {
      return clidetail::run_typed<Rat>(cfg, cmd, rat_ctx{}, in, out, err);
    }
    uint64_t p = 0;
    try {
      size_t used = 0;
      p = std::stoull(cfg.field, &used);
      if (used != cfg.field.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw parse_error("--field must be a prime or Q, got '" + cfg.field + "'");
    }
    if (!is_prime_u64(p) || p >= (uint64_t(1) << 31))
      throw parse_error("--field must be a prime < 2^31, got '" + cfg.field + "'");
    return clidetail::run_typed<Fp>(cfg, cmd, p, in, out, err);
  } catch (const parse_error& e) {
    err << "parse error: " << e.what() << "\n";
    return EXIT_PARSE;
  } catch (const degenerate_error& e) {
    err << "degenerate input: " << e.what() << "\n";
    return EXIT_DEGENERATE;
  } catch (const timeout_error& e) {
    err << "time limit: " << e.what() << "\n";
    return EXIT_CRITERION;
  } catch (const criterion_error& e) {
    err << "criterion failed: " << e.what() << "\n";
    return EXIT_CRITERION;
  } catch (const domain_error& e) {
    err << "invalid request: " << e.what() << "\n";
    return EXIT_PARSE;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace tensordec
