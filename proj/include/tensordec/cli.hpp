#ifndef TENSORDEC_CLI_HPP
#define TENSORDEC_CLI_HPP

#include <fstream>
#include <sstream>

#include "tensordec/io.hpp"

namespace tensordec {

struct JobConfig {
  std::string field = "32003";  // prime characteristic or "Q"
  std::string method = "auto";  // auto|catalecticant|generalized|hilbert|lift|vsp|mixed
  int h = -1;
  int s = -1;               // derivative order override (generalized / vsp reduce)
  std::vector<int> spec_a;  // flattening a-part (mixed)
  uint64_t seed = 1;
  int chart_retries = 5;
  double time_limit = 0;  // seconds; 0 = none
  std::string input = "-";
  std::string output = "-";
  // gen parameters
  int n = -1, d = -1;
  std::vector<int> dims, degrees;
};

// exit codes: 0 success, 2 criterion failed / not identifiable,
//             3 degenerate input, 4 parse error
enum ExitCode { EXIT_OK = 0, EXIT_CRITERION = 2, EXIT_DEGENERATE = 3, EXIT_PARSE = 4 };

namespace clidetail {

inline std::string read_stream_or_file(const std::string& path, std::istream& in) {
  if (path == "-") {
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
  std::ifstream f(path);
  if (!f) throw parse_error("cannot open input '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline void write_stream_or_file(const std::string& path, std::ostream& out,
                                 const std::string& data) {
  if (path == "-") {
    out << data;
    if (!data.empty() && data.back() != '\n') out << "\n";
    return;
  }
  std::ofstream f(path);
  if (!f) throw parse_error("cannot open output '" + path + "'");
  f << data;
  if (!data.empty() && data.back() != '\n') f << "\n";
}

inline bool looks_like_json(const std::string& s) {
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    return c == '{';
  }
  return false;
}

template <class K>
MixedTensor<K> parse_input_tensor(const typename field_traits<K>::ctx_t& ctx,
                                  const std::string& text) {
  if (looks_like_json(text)) {
    json j = json::parse(text, nullptr, true, true);
    if (j.contains("tensor")) return tensor_from_json<K>(ctx, j["tensor"]);
    if (j.contains("polynomial")) {
      Poly<K> f = parse_poly<K>(ctx, j["polynomial"].get<std::string>());
      return tensor_from_sym(make_sym_tensor(f, static_cast<int>(f.degree())));
    }
    return tensor_from_json<K>(ctx, j);
  }
  Poly<K> f = parse_poly<K>(ctx, text);
  if (f.is_zero()) throw parse_error("zero polynomial input");
  if (!f.is_homogeneous()) throw parse_error("input polynomial must be homogeneous");
  return tensor_from_sym(make_sym_tensor(f, static_cast<int>(f.degree())));
}

// Degree-only identifiability checks for mixed tensors (the flattening
// analogue of the symmetric certificate).
template <class K>
IdentifiabilityCertificate certify_mixed(const MixedTensor<K>& T, int h,
                                         std::optional<FlatteningSpec> spec_in,
                                         const DecomposeOpts& opts) {
  IdentifiabilityCertificate best;
  best.seed = opts.seed;
  std::vector<FlatteningSpec> candidates;
  if (spec_in) {
    candidates.push_back(*spec_in);
  } else {
    std::vector<int> a(T.factors(), 0);
    std::function<void(int)> rec = [&](int i) {
      if (i == T.factors()) {
        FlatteningSpec s = FlatteningSpec::from_a(a, T.degrees);
        long MA = tuple_basis_size(T.dims, s.a) - 1;
        if (MA < 1 || h - MA < 1) return;
        std::string why;
        auto model = decdetail::b_part_model<K>(T.ctx, T.dims, s.b, h - static_cast<int>(MA), &why);
        if (!model) return;
        if (decdetail::expected_codim(*model) < MA) return;
        candidates.push_back(std::move(s));
        return;
      }
      for (int v = 0; v <= T.degrees[i]; ++v) {
        a[i] = v;
        rec(i + 1);
      }
      a[i] = 0;
    };
    rec(0);
  }
  for (const auto& spec : candidates) {
    IdentifiabilityCertificate cert;
    cert.seed = opts.seed;
    cert.spec_a = spec.a;
    try {
      long MA = tuple_basis_size(T.dims, spec.a) - 1;
      int r = h - static_cast<int>(MA);
      cert.ns = MA;
      cert.expected_i = binomial(h, MA);
      cert.expected_ii = binomial(h - 1, MA);
      Mat<K> flat = mixed_flattening(T, spec);
      cert.rank_flattening = rank_of(flat);
      if (cert.rank_flattening != MA + 1) {
        cert.notes = "flattening rows are dependent";
        best = cert;
        continue;
      }
      LinearSubspace<K> H{flat.cols(), flat, "flattening rows"};
      std::string why;
      auto model = decdetail::b_part_model<K>(T.ctx, T.dims, spec.b, r, &why);
      if (!model) {
        cert.notes = why;
        best = cert;
        continue;
      }
      auto sec = intersect_linear_section(*model, H, decdetail::section_opts<K>(opts, 1, false));
      cert.positive_dim_i = !sec.zero_dimensional;
      cert.degree_i = sec.zero_dimensional ? sec.degree : -1;
      bool cond_i = sec.zero_dimensional && bigint(sec.degree) == cert.expected_i;
      bool cond_ii = false;
      if (r == 1) {
        cert.degree_ii = 0;
        cond_ii = true;
      } else {
        auto model_ii = decdetail::b_part_model<K>(T.ctx, T.dims, spec.b, r - 1, &why);
        if (model_ii) {
          auto sec_ii =
              intersect_linear_section(*model_ii, H, decdetail::section_opts<K>(opts, 2, false));
          cert.positive_dim_ii = !sec_ii.zero_dimensional;
          cert.degree_ii = sec_ii.zero_dimensional ? sec_ii.degree : -1;
          cond_ii = sec_ii.zero_dimensional && bigint(sec_ii.degree) < cert.expected_ii;
        } else {
          cert.notes = "condition (ii): " + why;
        }
      }
      cert.effective = (bigint(h) <= bigint(MA) + 2);
      if (cond_i && cond_ii) {
        cert.verdict = "identifiable";
        return cert;
      }
      best = cert;
    } catch (const timeout_error&) {
      throw;
    } catch (const std::exception& e) {
      cert.notes = e.what();
      best = cert;
    }
  }
  return best;
}

template <class K>
Decomposition<K> auto_decompose(const MixedTensor<K>& T, int h, std::optional<int> s,
                                std::optional<FlatteningSpec> spec, const DecomposeOpts& opts,
                                std::string* tried) {
  std::vector<std::string> failures;
  if (T.factors() == 1) {
    SymTensor<K> F = sym_from_tensor(T);
    using Runner = std::function<Decomposition<K>()>;
    std::vector<std::pair<std::string, Runner>> chain = {
        {"catalecticant", [&] { return catalecticant_decompose(F, h, opts); }},
        {"generalized", [&] { return generalized_decompose(F, h, s, opts); }},
        {"hilbert", [&] { return hilbert_projection_decompose(F, h, opts); }},
        {"lift", [&] { return derivative_lift_decompose(F, opts); }},
    };
    for (auto& [name, run] : chain) {
      try {
        Decomposition<K> dec = run();
        if (tried) *tried = name;
        return dec;
      } catch (const timeout_error&) {
        throw;
      } catch (const std::exception& e) {
        failures.push_back(name + ": " + e.what());
      }
    }
  } else {
    // classical flattenings first, then the generalized method
    std::vector<FlatteningSpec> cat_specs;
    if (spec) {
      cat_specs.push_back(*spec);
    } else {
      std::vector<int> a(T.factors(), 0);
      std::function<void(int)> rec = [&](int i) {
        if (i == T.factors()) {
          FlatteningSpec sp = FlatteningSpec::from_a(a, T.degrees);
          if (tuple_basis_size(T.dims, sp.a) >= h &&
              decdetail::b_part_model<K>(T.ctx, T.dims, sp.b, 1))
            cat_specs.push_back(std::move(sp));
          return;
        }
        for (int v = 0; v <= T.degrees[i]; ++v) {
          a[i] = v;
          rec(i + 1);
        }
        a[i] = 0;
      };
      rec(0);
    }
    for (const auto& sp : cat_specs) {
      try {
        Decomposition<K> dec = mixed_catalecticant_decompose(T, h, sp, opts);
        if (tried) *tried = "mixed-catalecticant";
        return dec;
      } catch (const timeout_error&) {
        throw;
      } catch (const std::exception& e) {
        failures.push_back(std::string("mixed-catalecticant: ") + e.what());
      }
    }
    try {
      Decomposition<K> dec = mixed_decompose(T, h, spec, opts);
      if (tried) *tried = "mixed";
      return dec;
    } catch (const timeout_error&) {
      throw;
    } catch (const std::exception& e) {
      failures.push_back(std::string("mixed: ") + e.what());
    }
  }
  std::string all;
  for (const auto& f : failures) all += (all.empty() ? "" : " | ") + f;
  throw criterion_error("auto: no method succeeded (" + all + ")");
}

template <class K>
int run_typed(const JobConfig& cfg, const std::string& cmd,
              const typename field_traits<K>::ctx_t& ctx, std::istream& in, std::ostream& out,
              std::ostream& err) {
  DecomposeOpts opts;
  opts.seed = cfg.seed;
  opts.chart_retries = cfg.chart_retries;
  if (cfg.time_limit > 0) opts.deadline = Deadline::after_seconds(cfg.time_limit);
  std::string field_name = field_traits<K>::name(ctx);

  if (cmd == "gen") {
    json j;
    if (!cfg.dims.empty()) {
      if (cfg.dims.size() != cfg.degrees.size())
        throw parse_error("gen: --dims and --degrees must have equal length");
      // --dims takes projective dimensions: dims [3,3,3] means K^4 x K^4 x K^4
      auto gen = gen_tensor_of_rank<K>(ctx, cfg.dims, cfg.degrees, cfg.h, cfg.seed);
      j["tensor"] = tensor_to_json(gen.T);
      json forms = json::array();
      for (const auto& tup : gen.forms) {
        json tuple = json::array();
        for (const auto& f : tup) {
          json one = json::array();
          for (Index i = 0; i < f.size(); ++i) one.push_back(field_traits<K>::to_string(f[i]));
          tuple.push_back(one);
        }
        forms.push_back(tuple);
      }
      j["forms"] = forms;
      json lams = json::array();
      for (const auto& l : gen.lambda) lams.push_back(field_traits<K>::to_string(l));
      j["coefficients"] = lams;
    } else {
      if (cfg.n < 0 || cfg.d < 1 || cfg.h < 1)
        throw parse_error("gen: need --n, --d, --h (or --dims/--degrees)");
      auto gen = gen_polynomial_of_rank<K>(ctx, cfg.n, cfg.d, cfg.h, cfg.seed);
      j["polynomial"] = to_string(gen.F.poly);
      json forms = json::array();
      for (const auto& f : gen.forms) {
        json one = json::array();
        for (Index i = 0; i < f.size(); ++i) one.push_back(field_traits<K>::to_string(f[i]));
        forms.push_back(one);
      }
      j["forms"] = forms;
      json lams = json::array();
      for (const auto& l : gen.lambda) lams.push_back(field_traits<K>::to_string(l));
      j["coefficients"] = lams;
    }
    j["field"] = field_name;
    j["seed"] = cfg.seed;
    write_stream_or_file(cfg.output, out, j.dump(2));
    return EXIT_OK;
  }

  if (cmd == "decompose" || cmd == "identify") {
    MixedTensor<K> T = parse_input_tensor<K>(ctx, read_stream_or_file(cfg.input, in));
    if (cfg.h < 1) throw parse_error(cmd + ": --h is required");
    std::optional<int> s;
    if (cfg.s >= 0) s = cfg.s;
    std::optional<FlatteningSpec> spec;
    if (!cfg.spec_a.empty()) spec = FlatteningSpec::from_a(cfg.spec_a, T.degrees);

    if (cmd == "identify") {
      IdentifiabilityCertificate cert;
      if (T.factors() == 1)
        cert = certify_identifiability(sym_from_tensor(T), cfg.h, s, opts);
      else
        cert = certify_mixed<K>(T, cfg.h, spec, opts);
      json j;
      j["field"] = field_name;
      j["h"] = cfg.h;
      j["certificate"] = certificate_to_json(cert);
      write_stream_or_file(cfg.output, out, j.dump(2));
      return cert.verdict == "identifiable" ? EXIT_OK : EXIT_CRITERION;
    }

    Decomposition<K> dec;
    std::string method_used = cfg.method;
    if (cfg.method == "auto") {
      dec = auto_decompose<K>(T, cfg.h, s, spec, opts, &method_used);
    } else if (cfg.method == "catalecticant") {
      dec = catalecticant_decompose(sym_from_tensor(T), cfg.h, opts);
    } else if (cfg.method == "generalized") {
      dec = generalized_decompose(sym_from_tensor(T), cfg.h, s, opts);
    } else if (cfg.method == "hilbert") {
      dec = hilbert_projection_decompose(sym_from_tensor(T), cfg.h, opts);
    } else if (cfg.method == "lift") {
      dec = derivative_lift_decompose(sym_from_tensor(T), opts);
    } else if (cfg.method == "vsp") {
      if constexpr (std::is_same_v<K, Fp>) {
        dec = vsp_reduce_decompose(sym_from_tensor(T), cfg.h, cfg.s >= 0 ? cfg.s : 2, opts);
      } else {
        throw domain_error("vsp method runs over prime fields only");
      }
    } else if (cfg.method == "mixed") {
      dec = mixed_decompose(T, cfg.h, spec, opts);
    } else {
      throw parse_error("unknown method '" + cfg.method + "'");
    }
    json j = decomposition_to_json(field_name, dec);
    j["method"] = method_used == "auto" ? dec.method : method_used;
    write_stream_or_file(cfg.output, out, j.dump(2));
    return EXIT_OK;
  }

  if (cmd == "verify") {
    std::string text = read_stream_or_file(cfg.input, in);
    json j = json::parse(text, nullptr, true, true);
    if (!j.contains("target") || !j.contains("decomposition"))
      throw parse_error("verify: input JSON must contain 'target' and 'decomposition'");
    MixedTensor<K> T = [&] {
      if (j["target"].is_string()) {
        Poly<K> f = parse_poly<K>(ctx, j["target"].get<std::string>());
        return tensor_from_sym(make_sym_tensor(f, static_cast<int>(f.degree())));
      }
      return tensor_from_json<K>(ctx, j["target"]);
    }();
    Decomposition<K> dec = decomposition_from_json<K>(ctx, j["decomposition"]);
    auto rep = verify_decomposition(T, dec);
    json o;
    o["verified"] = rep.ok;
    if (!rep.ok) o["detail"] = rep.first_difference;
    write_stream_or_file(cfg.output, out, o.dump(2));
    return rep.ok ? EXIT_OK : EXIT_CRITERION;
  }

  err << "unknown subcommand '" << cmd << "'\n";
  return EXIT_PARSE;
}

}  // namespace clidetail

// Entry point shared by the binary and the tests.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err);

}  // namespace tensordec

#endif
