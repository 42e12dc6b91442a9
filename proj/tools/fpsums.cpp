// Command line front end: single-shot evaluations (expsum, dtimes, sumset,
// romanoff), per-lambda CSV reports (triples, energy), and deterministic
// parallel sweeps driven by a JSON spec.
//
// Exit codes: 0 success, 1 property violation under --check, 2 parse or
// spec errors, 3 arithmetic precondition failures.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "fpsums/bounds.hpp"
#include "fpsums/charsum.hpp"
#include "fpsums/energy.hpp"
#include "fpsums/field.hpp"
#include "fpsums/incidence.hpp"
#include "fpsums/sumsets.hpp"

namespace {

using nlohmann::ordered_json;
using namespace fpsums;

constexpr int kSchemaVersion = 1;
constexpr int kExitViolation = 1;
constexpr int kExitParse = 2;
constexpr int kExitArithmetic = 3;

struct ParseFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Fields = std::vector<std::pair<std::string, std::string>>;

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string u128_str(u128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v > 0) {
    s.push_back(char('0' + int(v % 10)));
    v /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string::size_type start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(text.substr(start));
      return out;
    }
    out.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

u64 parse_u64_strict(const std::string& s) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
    throw ParseFailure("bad unsigned integer '" + s + "'");
  }
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    throw ParseFailure("unsigned integer out of range: '" + s + "'");
  }
}

i64 parse_i64_strict(const std::string& s) {
  const std::string body = (!s.empty() && s[0] == '-') ? s.substr(1) : s;
  if (body.empty() || body.find_first_not_of("0123456789") != std::string::npos) {
    throw ParseFailure("bad integer '" + s + "'");
  }
  try {
    return std::stoll(s);
  } catch (const std::exception&) {
    throw ParseFailure("integer out of range: '" + s + "'");
  }
}

// Polynomial grammar: "coeff,exp" terms joined by ';'. Coefficients may be
// negative and are reduced mod p; exponents are kept as written since the
// evaluators reduce them mod p-1 themselves.
SparsePoly parse_poly(const FieldContext& ctx, const std::string& text) {
  SparsePoly psi;
  for (const std::string& part : split(text, ';')) {
    const auto fields = split(part, ',');
    if (fields.size() != 2) {
      throw ParseFailure("polynomial term '" + part + "' is not 'coeff,exp'");
    }
    psi.terms.push_back(
        {ctx.reduce_signed(parse_i64_strict(fields[0])),
         parse_u64_strict(fields[1])});
  }
  return psi;
}

std::string render_poly(const SparsePoly& psi) {
  std::string out;
  for (const PolyTerm& t : psi.terms) {
    if (!out.empty()) out += " + ";
    out += std::to_string(t.coeff) + "*X^" + std::to_string(t.exp);
  }
  return out;
}

bool local_is_prime(u64 n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (u64 q = 3; q * q <= n; q += 2) {
    if (n % q == 0) return false;
  }
  return true;
}

u64 splitmix64(u64& state) {
  state += 0x9E3779B97F4A7C15ULL;
  u64 z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Scalars for a (p, d) cell are drawn from a stream seeded by the cell
// coordinates alone, so sweeps produce identical rows no matter how cells
// are distributed over workers.
u64 cell_seed(u64 seed, u64 p, u64 d) {
  u64 state = seed;
  (void)splitmix64(state);
  state ^= p;
  (void)splitmix64(state);
  state ^= d;
  return state;
}

std::vector<u64> sample_lambdas(u64 seed, u64 p, u64 d, u64 count) {
  std::vector<u64> out;
  const u64 want = std::min(count, p - 1);
  if (want == p - 1) {
    out.resize(want);
    for (u64 i = 0; i < want; ++i) out[i] = i + 1;
    return out;
  }
  u64 state = cell_seed(seed, p, d);
  while (out.size() < want) {
    const u64 lam = 1 + splitmix64(state) % (p - 1);
    if (std::find(out.begin(), out.end(), lam) == out.end()) out.push_back(lam);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Output helpers

void print_table(const Fields& fields) {
  std::size_t width = 0;
  for (const auto& [k, v] : fields) width = std::max(width, k.size());
  for (const auto& [k, v] : fields) {
    std::cout << k << std::string(width - k.size() + 2, ' ') << v << "\n";
  }
}

void print_json(ordered_json out) {
  ordered_json with_version;
  with_version["schema_version"] = kSchemaVersion;
  for (const auto& [k, v] : out.items()) with_version[k] = v;
  std::cout << with_version.dump(2) << "\n";
}

std::string csv_line(const Fields& fields, const std::vector<std::size_t>& cols,
                     bool header) {
  std::string line;
  for (std::size_t i : cols) {
    if (!line.empty()) line += ',';
    line += header ? fields[i].first : fields[i].second;
  }
  return line;
}

std::vector<std::size_t> select_columns(const Fields& all,
                                        const std::vector<std::string>& wanted) {
  std::vector<std::size_t> cols;
  if (wanted.empty()) {
    cols.resize(all.size());
    for (std::size_t i = 0; i < all.size(); ++i) cols[i] = i;
    return cols;
  }
  for (const std::string& name : wanted) {
    bool found = false;
    for (std::size_t i = 0; i < all.size(); ++i) {
      if (all[i].first == name) {
        cols.push_back(i);
        found = true;
        break;
      }
    }
    if (!found) throw ParseFailure("unknown output column '" + name + "'");
  }
  return cols;
}

// ---------------------------------------------------------------------------
// Row rendering and property checks shared by the CSV commands and sweep

Fields triples_fields(u64 p, u64 d, u64 lambda, const TripleCountReport& r) {
  return {{"p", std::to_string(p)},
          {"d", std::to_string(d)},
          {"lambda", std::to_string(lambda)},
          {"T", std::to_string(r.triples)},
          {"main_term", fmt_double(r.main_term)},
          {"deviation", fmt_double(r.deviation)},
          {"regime", regime_name(r.regime)},
          {"bound", fmt_double(r.regime_bound)},
          {"ratio", fmt_double(r.ratio)}};
}

Fields energy_fields(u64 p, u64 d, u64 lambda, const EnergyReport& r) {
  return {{"p", std::to_string(p)},
          {"d", std::to_string(d)},
          {"lambda", std::to_string(lambda)},
          {"energy", std::to_string(r.energy)},
          {"main_term", fmt_double(r.main_term)},
          {"deviation", fmt_double(r.deviation)},
          {"regime", regime_name(r.regime)},
          {"bound", fmt_double(r.regime_bound)},
          {"ratio", fmt_double(r.ratio)}};
}

bool triples_row_ok(const FieldContext& ctx, const Subgroup& g, u64 lambda,
                    const TripleCountReport& r) {
  if (!std::isfinite(r.ratio) || r.regime_bound <= 0) return false;
  if (r.deviation != std::abs(double(r.triples) - r.main_term)) return false;
  if (r.ratio != r.deviation / r.regime_bound) return false;
  if (g.order <= 8) {
    const u64 brute =
        collinear_triples_bruteforce(ctx, g.elements, g.elements, 1, lambda);
    if (r.triples != brute) return false;
  }
  return true;
}

bool energy_row_ok(const FieldContext& ctx, const Subgroup& g, u64 lambda,
                   const EnergyReport& r) {
  if (!std::isfinite(r.ratio) || r.regime_bound <= 0) return false;
  if (r.energy < g.order * g.order) return false;
  if (g.order <= 20) {
    const std::vector<u64> s = translate_set(ctx, g.elements, lambda);
    u64 count = 0;
    for (u64 a : s)
      for (u64 b : s)
        for (u64 c : s)
          for (u64 e : s) {
            if (ctx.mul(a, b) == ctx.mul(c, e)) ++count;
          }
    if (count != r.energy) return false;
  }
  return true;
}

Fields report_row(const std::string& task, const FieldContext& ctx, u64 d,
                  u64 lambda, bool check, bool* ok) {
  const Subgroup g = ctx.subgroup(d);
  if (task == "energy") {
    const EnergyReport r = energy_deviation_report(ctx, g, lambda);
    if (check && !energy_row_ok(ctx, g, lambda, r)) *ok = false;
    return energy_fields(ctx.p(), d, lambda, r);
  }
  const TripleCountReport r = triple_deviation_report(ctx, g, lambda);
  if (check && !triples_row_ok(ctx, g, lambda, r)) *ok = false;
  return triples_fields(ctx.p(), d, lambda, r);
}

// ---------------------------------------------------------------------------
// Single-shot commands

int run_expsum(u64 p, const std::string& poly_text, u64 j, bool decomposed,
               const std::string& format) {
  const FieldContext ctx(p);
  const SparsePoly psi = parse_poly(ctx, poly_text);
  validate_poly(ctx, psi);
  validate_char(ctx, j);

  const cdouble s = eval_sparse_sum(ctx, psi, j);
  cdouble s2;
  if (decomposed) s2 = eval_sum_subgroup_decomposed(ctx, psi, j);

  if (format == "json") {
    ordered_json out;
    out["p"] = p;
    out["poly"] = render_poly(psi);
    out["char"] = j;
    out["sum_re"] = s.real();
    out["sum_im"] = s.imag();
    out["abs"] = std::abs(s);
    if (decomposed) {
      out["decomposed_re"] = s2.real();
      out["decomposed_im"] = s2.imag();
      out["decomposed_gap"] = std::abs(s - s2);
    }
    if (psi.is_trinomial()) {
      const BoundReport rep = bound_report(ctx, psi, j);
      ordered_json bounds;
      for (const auto& e : rep.entries()) {
        bounds[e.name] = {{"value", e.value}, {"ratio", e.ratio}};
      }
      out["bounds"] = bounds;
      out["thm16_regime"] = regime_name(rep.thm16_regime);
      out["best"] = rep.best;
    } else {
      out["trivial"] = double(p - 1);
      out["weil"] = weil_bound(p, psi);
    }
    print_json(out);
    return 0;
  }

  Fields fields{{"p", std::to_string(p)},
                {"poly", render_poly(psi)},
                {"char", std::to_string(j)},
                {"sum_re", fmt_double(s.real())},
                {"sum_im", fmt_double(s.imag())},
                {"abs", fmt_double(std::abs(s))}};
  if (decomposed) {
    fields.emplace_back("decomposed_re", fmt_double(s2.real()));
    fields.emplace_back("decomposed_im", fmt_double(s2.imag()));
    fields.emplace_back("decomposed_gap", fmt_double(std::abs(s - s2)));
  }
  if (psi.is_trinomial()) {
    const BoundReport rep = bound_report(ctx, psi, j);
    for (const auto& e : rep.entries()) {
      fields.emplace_back(e.name, fmt_double(e.value) + "  (ratio " +
                                      fmt_double(e.ratio) + ")");
    }
    fields.emplace_back("thm16_regime", regime_name(rep.thm16_regime));
    fields.emplace_back("best", rep.best);
  } else {
    // The six-way comparison needs a trinomial; smaller polynomials still
    // get the generic bounds.
    fields.emplace_back("trivial", fmt_double(double(p - 1)));
    fields.emplace_back("weil", fmt_double(weil_bound(p, psi)));
  }
  print_table(fields);
  return 0;
}

int run_dtimes(u64 p, const std::string& set_text, u64 order,
               const std::string& format) {
  const FieldContext ctx(p);
  std::vector<u64> set;
  if (!set_text.empty()) {
    for (const std::string& part : split(set_text, ',')) {
      set.push_back(parse_u64_strict(part) % p);
    }
  } else {
    set = ctx.subgroup(order).elements;
  }
  const DxCheck chk = dx_vs_t_check(ctx, set);
  if (format == "json") {
    ordered_json out;
    out["p"] = p;
    out["n"] = set.size();
    out["dx"] = u128_str(chk.lhs);  // strings: values can exceed 2^64
    out["rhs"] = u128_str(chk.rhs);
    out["ratio"] = chk.ratio;
    print_json(out);
    return 0;
  }
  print_table({{"p", std::to_string(p)},
               {"n", std::to_string(set.size())},
               {"dx", u128_str(chk.lhs)},
               {"rhs", u128_str(chk.rhs)},
               {"ratio", fmt_double(chk.ratio)}});
  return 0;
}

int run_sumset(u64 p, u64 order, u64 lambda, u64 mu, const std::string& kind,
               const std::string& format) {
  const FieldContext ctx(p);
  const Subgroup g = ctx.subgroup(order);
  const SumsetReport r = kind == "ratio_shift"
                             ? ratio_shift_set(ctx, g, lambda % p, mu % p)
                             : three_fold_sumset(ctx, g, lambda % p, mu % p);
  if (format == "json") {
    ordered_json out;
    out["p"] = p;
    out["d"] = order;
    out["lambda"] = lambda % p;
    out["mu"] = mu % p;
    out["kind"] = kind;
    out["size"] = r.size;
    out["missing_nonzero"] = r.missing_nonzero;
    out["covered"] = r.covered;
    out["regime"] = regime_name(r.regime);
    out["bound"] = r.regime_bound;
    if (r.kind == SumsetKind::ratio_shift) {
      out["product_size"] = r.product_size;
      out["zero_in_product"] = r.zero_in_product;
    }
    print_json(out);
    return 0;
  }
  Fields fields{{"p", std::to_string(p)},
                {"d", std::to_string(order)},
                {"lambda", std::to_string(lambda % p)},
                {"mu", std::to_string(mu % p)},
                {"kind", kind},
                {"size", std::to_string(r.size)},
                {"missing_nonzero", std::to_string(r.missing_nonzero)},
                {"covered", r.covered ? "true" : "false"},
                {"regime", regime_name(r.regime)},
                {"bound", fmt_double(r.regime_bound)}};
  if (r.kind == SumsetKind::ratio_shift) {
    fields.emplace_back("product_size", std::to_string(r.product_size));
    fields.emplace_back("zero_in_product", r.zero_in_product ? "true" : "false");
  }
  print_table(fields);
  return 0;
}

int run_romanoff(u64 p, i64 base, const std::string& format) {
  const FieldContext ctx(p);
  const RomanoffReport r = romanoff_coverage(ctx, base);
  if (format == "json") {
    ordered_json out;
    out["p"] = p;
    out["base"] = base;
    out["order"] = r.order;
    out["regime"] = regime_name(r.regime);
    out["missing"] = r.missing;
    print_json(out);
    return 0;
  }
  print_table({{"p", std::to_string(p)},
               {"base", std::to_string(base)},
               {"order", std::to_string(r.order)},
               {"regime", regime_name(r.regime)},
               {"missing", std::to_string(r.missing)}});
  return 0;
}

// ---------------------------------------------------------------------------
// CSV report commands (one row per lambda)

int run_report(const std::string& task, u64 p, u64 d,
               const std::vector<u64>& fixed_lambdas, u64 random_count,
               u64 seed) {
  const FieldContext ctx(p);
  std::vector<u64> lambdas;
  for (u64 lam : fixed_lambdas) lambdas.push_back(lam % p);
  if (random_count > 0) {
    for (u64 lam : sample_lambdas(seed, p, d, random_count)) {
      lambdas.push_back(lam);
    }
  }
  if (lambdas.empty()) {
    throw ParseFailure("need --lambda or --lambda-random");
  }
  std::sort(lambdas.begin(), lambdas.end());
  lambdas.erase(std::unique(lambdas.begin(), lambdas.end()), lambdas.end());

  bool first = true;
  for (u64 lambda : lambdas) {
    bool ok = true;
    const Fields fields = report_row(task, ctx, d, lambda, false, &ok);
    const auto cols = select_columns(fields, {});
    if (first) std::cout << csv_line(fields, cols, true) << "\n";
    first = false;
    std::cout << csv_line(fields, cols, false) << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// Sweep

struct SweepConfig {
  std::string task = "triples";
  std::vector<u64> primes;
  bool orders_all = true;
  std::vector<u64> order_list;
  u64 max_order = 0;  // 0 means no cap
  u64 lambda_count = 1;
  u64 seed = 0;
  unsigned jobs = 1;
  std::vector<std::string> columns;
};

SweepConfig load_sweep_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseFailure("cannot open spec file '" + path + "'");
  ordered_json spec;
  try {
    in >> spec;
  } catch (const nlohmann::json::exception& e) {
    throw ParseFailure(std::string("spec is not valid JSON: ") + e.what());
  }

  SweepConfig cfg;
  if (spec.contains("schema_version") && spec["schema_version"] != kSchemaVersion) {
    throw ParseFailure("unsupported spec schema_version");
  }
  if (spec.contains("task")) cfg.task = spec["task"].get<std::string>();
  if (cfg.task != "triples" && cfg.task != "energy") {
    throw ParseFailure("task must be 'triples' or 'energy'");
  }

  if (spec.contains("primes")) {
    for (const auto& v : spec["primes"]) cfg.primes.push_back(v.get<u64>());
  } else if (spec.contains("prime_range")) {
    const auto& range = spec["prime_range"];
    u64 start = range.at("start").get<u64>();
    u64 count = range.at("count").get<u64>();
    for (u64 n = std::max<u64>(start, 3); cfg.primes.size() < count; ++n) {
      if (n % 2 == 1 && local_is_prime(n)) cfg.primes.push_back(n);
    }
  } else {
    throw ParseFailure("spec needs 'primes' or 'prime_range'");
  }
  std::sort(cfg.primes.begin(), cfg.primes.end());
  cfg.primes.erase(std::unique(cfg.primes.begin(), cfg.primes.end()),
                   cfg.primes.end());
  if (cfg.primes.empty()) throw ParseFailure("spec selects no primes");
  for (u64 p : cfg.primes) {
    if (p < 3 || p % 2 == 0 || !local_is_prime(p)) {
      throw ParseFailure("primes entry " + std::to_string(p) +
                         " is not an odd prime");
    }
  }

  if (spec.contains("subgroup_orders")) {
    const auto& orders = spec["subgroup_orders"];
    if (orders.is_string()) {
      if (orders.get<std::string>() != "all") {
        throw ParseFailure("subgroup_orders must be 'all' or a list");
      }
    } else {
      cfg.orders_all = false;
      for (const auto& v : orders) cfg.order_list.push_back(v.get<u64>());
    }
  }
  if (spec.contains("max_order")) cfg.max_order = spec["max_order"].get<u64>();
  if (spec.contains("lambda_count")) {
    cfg.lambda_count = spec["lambda_count"].get<u64>();
    if (cfg.lambda_count == 0) throw ParseFailure("lambda_count must be >= 1");
  }
  if (spec.contains("seed")) cfg.seed = spec["seed"].get<u64>();
  if (spec.contains("jobs")) {
    cfg.jobs = spec["jobs"].get<unsigned>();
    if (cfg.jobs == 0) throw ParseFailure("jobs must be >= 1");
  }
  if (spec.contains("columns")) {
    for (const auto& v : spec["columns"]) {
      cfg.columns.push_back(v.get<std::string>());
    }
  }
  return cfg;
}

std::vector<u64> subgroup_orders_for(const FieldContext& ctx,
                                     const SweepConfig& cfg) {
  std::vector<u64> divs;
  if (cfg.orders_all) {
    divs.push_back(1);
    for (const auto& [q, e] : ctx.factor_p1()) {
      const std::size_t base = divs.size();
      u64 qe = 1;
      for (int i = 0; i < e; ++i) {
        qe *= q;
        for (std::size_t k = 0; k < base; ++k) divs.push_back(divs[k] * qe);
      }
    }
  } else {
    for (u64 d : cfg.order_list) {
      if (d >= 1 && (ctx.p() - 1) % d == 0) divs.push_back(d);
    }
  }
  std::sort(divs.begin(), divs.end());
  divs.erase(std::unique(divs.begin(), divs.end()), divs.end());
  if (cfg.max_order > 0) {
    divs.erase(std::remove_if(divs.begin(), divs.end(),
                              [&](u64 d) { return d > cfg.max_order; }),
               divs.end());
  }
  return divs;
}

int run_sweep(const std::string& spec_path, bool check, unsigned jobs_override,
              const std::string& out_path) {
  SweepConfig cfg = load_sweep_spec(spec_path);
  if (jobs_override > 0) cfg.jobs = jobs_override;

  std::vector<FieldContext> contexts;
  contexts.reserve(cfg.primes.size());
  for (u64 p : cfg.primes) contexts.emplace_back(p);

  struct Cell {
    std::size_t ctx_index;
    u64 d;
    u64 lambda;
  };
  std::vector<Cell> cells;
  for (std::size_t i = 0; i < contexts.size(); ++i) {
    for (u64 d : subgroup_orders_for(contexts[i], cfg)) {
      std::vector<u64> lambdas =
          sample_lambdas(cfg.seed, contexts[i].p(), d, cfg.lambda_count);
      std::sort(lambdas.begin(), lambdas.end());
      for (u64 lam : lambdas) cells.push_back({i, d, lam});
    }
  }

  // Column selection is validated against a template row before any work.
  const Fields shape = cfg.task == "energy" ? energy_fields(0, 0, 0, {})
                                            : triples_fields(0, 0, 0, {});
  const std::vector<std::size_t> cols = select_columns(shape, cfg.columns);

  std::vector<std::string> rows(cells.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> all_ok{true};
  std::mutex err_mu;
  std::string first_error;

  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      const Cell& cell = cells[i];
      try {
        bool ok = true;
        const Fields fields = report_row(cfg.task, contexts[cell.ctx_index],
                                         cell.d, cell.lambda, check, &ok);
        if (!ok) all_ok = false;
        rows[i] = csv_line(fields, cols, false);
      } catch (const std::exception& e) {
        const std::lock_guard<std::mutex> lock(err_mu);
        if (first_error.empty()) first_error = e.what();
      }
    }
  };

  const std::size_t pool_size = std::min<std::size_t>(cfg.jobs, cells.size());
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t + 1 < pool_size; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  if (!first_error.empty()) {
    std::cerr << "error: " << first_error << "\n";
    return kExitArithmetic;
  }

  std::ostringstream csv;
  csv << csv_line(shape, cols, true) << "\n";
  for (const std::string& row : rows) csv << row << "\n";

  if (out_path.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw ParseFailure("cannot open output file '" + out_path + "'");
    out << csv.str();
  }

  if (check && !all_ok) {
    std::cerr << "property violation detected\n";
    return kExitViolation;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact subgroup sums, triple counts and coverage in F_p"};
  app.require_subcommand(1);

  u64 p = 0;
  std::string poly_text;
  u64 char_j = 0;
  bool decomposed = false;
  std::string format = "table";
  const auto format_check = CLI::IsMember({"table", "json"});

  CLI::App* expsum = app.add_subcommand(
      "expsum", "Evaluate a sparse character sum and compare bounds");
  expsum->add_option("--p", p, "odd prime modulus")->required();
  expsum->add_option("--poly", poly_text, "terms 'a,k;b,l;c,m'")->required();
  expsum->add_option("--char", char_j, "multiplicative character index");
  expsum->add_flag("--decomposed", decomposed,
                   "also evaluate via the subgroup decomposition");
  expsum->add_option("--format", format)->check(format_check);

  u64 order = 0;
  std::vector<u64> fixed_lambdas;
  u64 lambda_random = 0;
  u64 seed = 0;

  CLI::App* triples = app.add_subcommand(
      "triples", "Collinear triple counts for a subgroup, one CSV row per lambda");
  triples->add_option("--p", p)->required();
  triples->add_option("--order", order, "subgroup order, must divide p-1")
      ->required();
  triples->add_option("--lambda", fixed_lambdas, "explicit scalar (repeatable)");
  triples->add_option("--lambda-random", lambda_random, "sample this many scalars");
  triples->add_option("--seed", seed);

  CLI::App* energy = app.add_subcommand(
      "energy", "Multiplicative energy of a shifted subgroup, CSV rows");
  energy->add_option("--p", p)->required();
  energy->add_option("--order", order)->required();
  energy->add_option("--lambda", fixed_lambdas, "explicit scalar (repeatable)");
  energy->add_option("--lambda-random", lambda_random);
  energy->add_option("--seed", seed);

  std::string set_text;
  CLI::App* dtimes = app.add_subcommand(
      "dtimes", "Difference-product count against its triple-count identity");
  dtimes->add_option("--p", p)->required();
  CLI::Option* set_opt = dtimes->add_option("--set", set_text,
                                            "comma separated residues");
  dtimes->add_option("--order", order, "use the subgroup of this order")
      ->excludes(set_opt);
  dtimes->add_option("--format", format)->check(format_check);

  u64 mu = 1;
  std::string kind = "three_fold";
  CLI::App* sumset = app.add_subcommand(
      "sumset", "Coverage of the three-fold sumset or shifted ratio set");
  sumset->add_option("--p", p)->required();
  sumset->add_option("--order", order)->required();
  sumset->add_option("--lambda", fixed_lambdas, "scalar (single value)");
  sumset->add_option("--mu", mu)->required();
  sumset->add_option("--kind", kind)
      ->check(CLI::IsMember({"three_fold", "ratio_shift"}));
  sumset->add_option("--format", format)->check(format_check);

  i64 base = 0;
  CLI::App* romanoff = app.add_subcommand(
      "romanoff", "Residues not reachable as prime plus three powers of a base");
  romanoff->add_option("--p", p)->required();
  romanoff->add_option("--base", base)->required();
  romanoff->add_option("--format", format)->check(format_check);

  std::string spec_path;
  std::string out_path;
  bool check = false;
  unsigned jobs = 0;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "Run a (p, d, lambda) grid from a JSON spec into one CSV");
  sweep->add_option("--spec", spec_path, "JSON sweep spec")->required();
  sweep->add_flag("--check", check, "verify row properties, exit 1 on failure");
  sweep->add_option("--jobs", jobs, "worker count, overrides the spec");
  sweep->add_option("--out", out_path, "write CSV here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitParse;
  }

  try {
    if (app.got_subcommand(expsum)) {
      return run_expsum(p, poly_text, char_j, decomposed, format);
    }
    if (app.got_subcommand(triples)) {
      return run_report("triples", p, order, fixed_lambdas, lambda_random, seed);
    }
    if (app.got_subcommand(energy)) {
      return run_report("energy", p, order, fixed_lambdas, lambda_random, seed);
    }
    if (app.got_subcommand(dtimes)) {
      if (set_text.empty() && order == 0) {
        throw ParseFailure("need --set or --order");
      }
      return run_dtimes(p, set_text, order, format);
    }
    if (app.got_subcommand(sumset)) {
      if (fixed_lambdas.size() != 1) {
        throw ParseFailure("sumset needs exactly one --lambda");
      }
      return run_sumset(p, order, fixed_lambdas[0], mu, kind, format);
    }
    if (app.got_subcommand(romanoff)) {
      return run_romanoff(p, base, format);
    }
    if (app.got_subcommand(sweep)) {
      return run_sweep(spec_path, check, jobs, out_path);
    }
  } catch (const ParseFailure& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const FieldError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitArithmetic;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  }
  return 0;
}
