#ifndef TENSORDEC_IO_HPP
#define TENSORDEC_IO_HPP

#include <json.hpp>

#include "tensordec/generators.hpp"

namespace tensordec {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Scalar parsing: integers, fractions a/b, and extension elements in `g`.
// ---------------------------------------------------------------------------

namespace iodetail {

inline bigint parse_bigint(const std::string& s) {
  if (s.empty()) throw parse_error("empty integer literal");
  size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) throw parse_error("bad integer literal '" + s + "'");
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i])))
      throw parse_error("bad integer literal '" + s + "'");
  return bigint(s);
}

}  // namespace iodetail

template <class K>
K parse_scalar(const typename field_traits<K>::ctx_t& ctx, const std::string& text);

template <>
inline Rat parse_scalar<Rat>(const rat_ctx&, const std::string& text) {
  auto slash = text.find('/');
  if (slash == std::string::npos) return Rat(bigrat(iodetail::parse_bigint(text)));
  bigint num = iodetail::parse_bigint(text.substr(0, slash));
  bigint den = iodetail::parse_bigint(text.substr(slash + 1));
  if (den == 0) throw parse_error("zero denominator in '" + text + "'");
  return Rat(num, den);
}

template <>
inline Fp parse_scalar<Fp>(const uint64_t& p, const std::string& text) {
  auto slash = text.find('/');
  if (slash == std::string::npos) return Fp(p, iodetail::parse_bigint(text));
  Fp num(p, iodetail::parse_bigint(text.substr(0, slash)));
  Fp den(p, iodetail::parse_bigint(text.substr(slash + 1)));
  if (den.is_zero()) throw parse_error("zero denominator in '" + text + "'");
  return num / den;
}

// canonical polynomial string in the generator g: "3+5*g+g^2"
template <>
inline Fq parse_scalar<Fq>(const FqCtxPtr& ctx, const std::string& text) {
  fppoly::PV acc;
  std::string t;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) t += c;
  if (t.empty()) throw parse_error("empty field element");
  size_t pos = 0;
  bool neg = false;
  auto add_term = [&](const bigint& c, size_t e) {
    if (acc.size() <= e) acc.resize(e + 1, 0);
    Fp cur = Fp::from_raw(ctx->p, acc[e]);
    cur += Fp(ctx->p, neg ? -c : c);
    acc[e] = static_cast<uint64_t>(cur.value());
  };
  while (pos < t.size()) {
    if (t[pos] == '+') {
      neg = false;
      ++pos;
      continue;
    }
    if (t[pos] == '-') {
      neg = true;
      ++pos;
      continue;
    }
    std::string num;
    while (pos < t.size() && (std::isdigit(static_cast<unsigned char>(t[pos])) || t[pos] == '/'))
      num += t[pos++];
    bigint c = 1;
    if (!num.empty()) {
      auto slash = num.find('/');
      if (slash == std::string::npos) {
        c = iodetail::parse_bigint(num);
      } else {
        Fp v = parse_scalar<Fp>(ctx->p, num);
        c = v.value();
      }
    }
    if (pos < t.size() && t[pos] == '*') ++pos;
    size_t e = 0;
    if (pos < t.size() && t[pos] == 'g') {
      ++pos;
      e = 1;
      if (pos < t.size() && t[pos] == '^') {
        ++pos;
        std::string es;
        while (pos < t.size() && std::isdigit(static_cast<unsigned char>(t[pos]))) es += t[pos++];
        if (es.empty()) throw parse_error("bad exponent in '" + text + "'");
        e = std::stoul(es);
      }
    }
    add_term(c, e);
  }
  return Fq(ctx, acc);
}

// ---------------------------------------------------------------------------
// Polynomial text grammar: terms c*x0^e0*x1^e1*... joined by + and -.
// ---------------------------------------------------------------------------

template <class K>
Poly<K> parse_poly(const typename field_traits<K>::ctx_t& ctx, const std::string& text,
                   int nvars_hint = -1) {
  std::string t;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) t += c;
  if (t.empty()) throw parse_error("empty polynomial");
  struct RawTerm {
    K coeff;
    std::vector<std::pair<int, int>> vars;  // (index, exponent)
  };
  std::vector<RawTerm> raw;
  int maxvar = -1;
  size_t pos = 0;
  while (pos < t.size()) {
    bool neg = false;
    bool saw_sign = false;
    while (pos < t.size() && (t[pos] == '+' || t[pos] == '-')) {
      if (t[pos] == '-') neg = !neg;
      saw_sign = true;
      ++pos;
    }
    if (pos >= t.size()) {
      if (saw_sign) throw parse_error("dangling sign in polynomial");
      break;
    }
    // one term: optional coefficient, then variable powers separated by '*'
    RawTerm term;
    term.coeff = field_traits<K>::one(ctx);
    bool saw_anything = false;
    bool coeff_seen = false;
    while (pos < t.size() && t[pos] != '+' && t[pos] != '-') {
      if (t[pos] == '*') {
        if (!saw_anything) throw parse_error("term cannot start with '*'");
        ++pos;
        continue;
      }
      if (t[pos] == 'x') {
        ++pos;
        std::string idx;
        while (pos < t.size() && std::isdigit(static_cast<unsigned char>(t[pos]))) idx += t[pos++];
        if (idx.empty()) throw parse_error("variable index missing after 'x'");
        int vi = std::stoi(idx);
        int e = 1;
        if (pos < t.size() && t[pos] == '^') {
          ++pos;
          std::string es;
          while (pos < t.size() && std::isdigit(static_cast<unsigned char>(t[pos]))) es += t[pos++];
          if (es.empty()) throw parse_error("exponent missing after '^'");
          e = std::stoi(es);
        }
        term.vars.emplace_back(vi, e);
        maxvar = std::max(maxvar, vi);
        saw_anything = true;
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(t[pos])) || t[pos] == '/') {
        if (coeff_seen) throw parse_error("unexpected second coefficient in term");
        std::string num;
        while (pos < t.size() &&
               (std::isdigit(static_cast<unsigned char>(t[pos])) || t[pos] == '/'))
          num += t[pos++];
        term.coeff = term.coeff * parse_scalar<K>(ctx, num);
        coeff_seen = true;
        saw_anything = true;
        continue;
      }
      throw parse_error(std::string("unexpected character '") + t[pos] + "' in polynomial");
    }
    if (!saw_anything) throw parse_error("empty term in polynomial");
    if (neg) term.coeff = -term.coeff;
    raw.push_back(std::move(term));
  }
  if (raw.empty()) throw parse_error("no terms in polynomial");
  int nvars = std::max(maxvar + 1, nvars_hint);
  if (nvars <= 0) throw parse_error("polynomial has no variables");
  std::vector<typename Poly<K>::Term> terms;
  for (auto& r : raw) {
    MultiIndex m(nvars, 0);
    for (auto [vi, e] : r.vars) m[vi] = static_cast<uint16_t>(m[vi] + e);
    terms.push_back({std::move(m), r.coeff});
  }
  return Poly<K>::from_terms(ctx, nvars, MonomialOrder::grevlex(), std::move(terms));
}

// ---------------------------------------------------------------------------
// Tensor JSON: {"dims": [...], "degrees": [...], "entries": [{"idx": [[..]..], "coeff": ".."}]}
// ---------------------------------------------------------------------------

template <class K>
json tensor_to_json(const MixedTensor<K>& T) {
  json j;
  j["dims"] = T.dims;
  j["degrees"] = T.degrees;
  json entries = json::array();
  for (const auto& [k, c] : T.entries) {
    json e;
    json idx = json::array();
    for (const auto& mi : k) {
      json v = json::array();
      for (auto x : mi) v.push_back(static_cast<int>(x));
      idx.push_back(v);
    }
    e["idx"] = idx;
    e["coeff"] = field_traits<K>::to_string(c);
    entries.push_back(e);
  }
  j["entries"] = entries;
  return j;
}

template <class K>
MixedTensor<K> tensor_from_json(const typename field_traits<K>::ctx_t& ctx, const json& j) {
  if (!j.contains("dims") || !j.contains("degrees") || !j.contains("entries"))
    throw parse_error("tensor JSON must contain dims, degrees, entries");
  std::vector<int> dims = j["dims"].get<std::vector<int>>();
  std::vector<int> degrees = j["degrees"].get<std::vector<int>>();
  MixedTensor<K> T = mixed_zero<K>(ctx, dims, degrees);
  for (const auto& e : j["entries"]) {
    MKey key;
    for (const auto& v : e["idx"]) {
      MultiIndex mi;
      for (const auto& x : v) mi.push_back(static_cast<uint16_t>(x.get<int>()));
      key.push_back(std::move(mi));
    }
    T.check_key(key);
    T.add(key, parse_scalar<K>(ctx, e["coeff"].get<std::string>()));
  }
  return T;
}

// ---------------------------------------------------------------------------
// Decomposition JSON.
// ---------------------------------------------------------------------------

inline json certificate_to_json(const IdentifiabilityCertificate& cert) {
  json c;
  if (!cert.spec_a.empty())
    c["a"] = cert.spec_a;
  else
    c["s"] = cert.s;
  c["degree_found"] = cert.degree_i;
  c["expected"] = cert.expected_i.str();
  c["degree_found_second"] = cert.degree_ii;
  c["expected_second"] = cert.expected_ii.str();
  c["verdict"] = cert.verdict;
  c["effective"] = cert.effective;
  c["seed"] = cert.seed;
  if (!cert.notes.empty()) c["notes"] = cert.notes;
  return c;
}

template <class K>
json decomposition_to_json(const std::string& field_name, const Decomposition<K>& dec) {
  using PK = typename solve_traits<K>::point_scalar;
  json j;
  j["method"] = dec.method;
  j["field"] = field_name;
  j["dims"] = dec.dims;
  j["degrees"] = dec.degrees;
  bool symmetric = dec.dims.size() == 1;
  json forms = json::array();
  for (const auto& f : dec.forms) {
    if (symmetric) {
      json one = json::array();
      for (Index i = 0; i < f.factors[0].size(); ++i)
        one.push_back(field_traits<PK>::to_string(f.factors[0][i]));
      forms.push_back(one);
    } else {
      json tuple = json::array();
      for (const auto& fac : f.factors) {
        json one = json::array();
        for (Index i = 0; i < fac.size(); ++i)
          one.push_back(field_traits<PK>::to_string(fac[i]));
        tuple.push_back(one);
      }
      forms.push_back(tuple);
    }
  }
  j["forms"] = forms;
  json lams = json::array();
  for (const auto& l : dec.lambda) lams.push_back(field_traits<PK>::to_string(l));
  j["coefficients"] = lams;
  j["certificate"] = certificate_to_json(dec.certificate);
  j["extension_degree"] = dec.extension_degree;
  if constexpr (std::is_same_v<K, Fp>) {
    if (dec.extension_degree > 1) {
      json mod = json::array();
      for (auto c : dec.point_ctx->modulus) mod.push_back(c);
      j["modulus"] = mod;
    }
  }
  return j;
}

// Re-read a decomposition for verification.
template <class K>
Decomposition<K> decomposition_from_json(const typename field_traits<K>::ctx_t& ctx,
                                         const json& j) {
  using PK = typename solve_traits<K>::point_scalar;
  Decomposition<K> dec;
  dec.dims = j.at("dims").get<std::vector<int>>();
  dec.degrees = j.at("degrees").get<std::vector<int>>();
  dec.method = j.value("method", "unknown");
  dec.extension_degree = j.value("extension_degree", 1);
  if constexpr (std::is_same_v<K, Fp>) {
    if (dec.extension_degree > 1) {
      fppoly::PV mod;
      for (const auto& c : j.at("modulus")) mod.push_back(c.get<uint64_t>());
      dec.point_ctx = FqCtx::from_modulus(ctx, mod);
    } else {
      dec.point_ctx = FqCtx::prime(ctx);
    }
  } else {
    dec.point_ctx = {};
  }
  bool symmetric = dec.dims.size() == 1;
  for (const auto& f : j.at("forms")) {
    RankOneForm<PK> form;
    auto read_vec = [&](const json& arr) {
      Vec<PK> v = zero_vector<PK>(dec.point_ctx, static_cast<Index>(arr.size()));
      for (size_t i = 0; i < arr.size(); ++i)
        v[static_cast<Index>(i)] = parse_scalar<PK>(dec.point_ctx, arr[i].get<std::string>());
      return v;
    };
    if (symmetric) {
      form.factors.push_back(read_vec(f));
    } else {
      for (const auto& fac : f) form.factors.push_back(read_vec(fac));
    }
    dec.forms.push_back(std::move(form));
  }
  for (const auto& l : j.at("coefficients"))
    dec.lambda.push_back(parse_scalar<PK>(dec.point_ctx, l.get<std::string>()));
  if (dec.lambda.size() != dec.forms.size())
    throw parse_error("decomposition JSON: forms/coefficients length mismatch");
  return dec;
}

}  // namespace tensordec

#endif
