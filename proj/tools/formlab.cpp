#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "formlab/areas.hpp"
#include "formlab/checks.hpp"
#include "formlab/counting.hpp"
#include "formlab/error.hpp"
#include "formlab/exponents.hpp"
#include "formlab/families.hpp"
#include "formlab/structure.hpp"

using namespace formlab;
using json = nlohmann::ordered_json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

std::string num(long double x) {
  std::ostringstream os;
  os.precision(17);
  os << (double)x;
  return os.str();
}

// Accepts plain integers as well as "1e8" style exact integers.
long long parse_count(const std::string& text, const std::string& flag) {
  try {
    std::size_t used = 0;
    long long v = std::stoll(text, &used, 0);
    if (used == text.size()) return v;
    long double x = std::stold(text, &used);
    if (used == text.size() && x == std::floor(x) && std::fabs(x) < 9.2e18L) return (long long)x;
  } catch (const std::exception&) {
  }
  throw UsageError(flag + " expects an integer, got '" + text + "'");
}

std::uint64_t parse_seed(const std::string& text) {
  try {
    std::size_t used = 0;
    std::uint64_t v = std::stoull(text, &used, 0);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw UsageError("--seed expects an integer such as 0xF0EB, got '" + text + "'");
}

json coeffs_json(const BinaryForm& F) {
  json c = json::array();
  for (const auto& q : F.coeffs()) c.push_back(formlab::to_string(q));
  return c;
}

// Member spec such as "L:d=5,p=7", or a serialized form {"coeffs": ["1","0","2"]}.
BinaryForm read_form(const std::string& text) {
  if (!text.empty() && text.front() == '{') {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::exception& e) {
      throw Error("ParseError", e.what());
    }
    if (!j.contains("coeffs") || !j["coeffs"].is_array()) throw Error("ParseError", "form JSON needs a coeffs array");
    std::vector<Rat> c;
    for (const auto& v : j["coeffs"]) c.push_back(parse_rational(v.is_string() ? v.get<std::string>() : v.dump()));
    return BinaryForm(c);
  }
  return parse_form_spec(text);
}

FamilyId read_family(const std::string& name, const std::string& catalog_path) {
  if (name == "qplus") return FamilyId::qplus();
  if (name == "qminus") return FamilyId::qminus();
  if (name == "L") return FamilyId::lfamily();
  if (name == "cyclo") return FamilyId::cyclotomic();
  if (name == "binom") {
    if (catalog_path.empty()) throw UsageError("family binom needs --catalog");
    std::ifstream in(catalog_path);
    if (!in) throw Error("IOError", "cannot open " + catalog_path);
    json j;
    try {
      j = json::parse(in);
    } catch (const json::exception& e) {
      throw Error("ParseError", e.what());
    }
    std::vector<BinomialEntry> entries;
    auto as_int = [](const json& v) { return Int(v.is_string() ? v.get<std::string>() : v.dump()); };
    for (const auto& e : j) entries.push_back({as_int(e.at("a")), as_int(e.at("b")), e.at("d").get<int>()});
    return FamilyId::binomial(entries);
  }
  throw UsageError("unknown family '" + name + "' (qplus, qminus, L, cyclo, binom)");
}

struct Member {
  std::string name;
  BinaryForm form;
};

// Members of degree d with their spec names, ordered by index then coefficients.
std::vector<Member> named_members(const FamilyId& fam, int d) {
  std::vector<Member> out;
  auto add = [&](const std::string& spec) { out.push_back({spec, parse_form_spec(spec)}); };
  switch (fam.kind) {
    case FamilyKind::Cyclotomic:
      for (long n = 1; n <= 2L * d * d + 2; ++n)
        if ((long)euler_phi(n) == d) add("cyclo:n=" + std::to_string(n));
      break;
    case FamilyKind::Binomial: {
      std::vector<Member> tmp;
      for (const auto& e : fam.catalog)
        if (e.d == d)
          tmp.push_back({"binom:a=" + formlab::to_string(e.a) + ",b=" + formlab::to_string(e.b) + ",d=" +
                             std::to_string(d),
                         binomial_form(e.a, e.b, d)});
      std::sort(tmp.begin(), tmp.end(), [](const Member& a, const Member& b) {
        return std::lexicographical_compare(a.form.coeffs().begin(), a.form.coeffs().end(), b.form.coeffs().begin(),
                                            b.form.coeffs().end());
      });
      out = tmp;
      break;
    }
    case FamilyKind::QPlus:
    case FamilyKind::QMinus:
      if (d % 2 == 0 && d >= 4)
        for (int nu = 1; nu <= d / 2 + 1; ++nu)
          add(fam.name() + ":d=" + std::to_string(d / 2) + ",nu=" + std::to_string(nu));
      break;
    case FamilyKind::Lfamily:
      if (d >= 5)
        for (long p = d; p < 2L * d; ++p)
          if (is_prime((std::uint64_t)p)) add("L:d=" + std::to_string(d) + ",p=" + std::to_string(p));
      break;
  }
  return out;
}

json matrix_json(const RationalMatrix& m) {
  return json::array({formlab::to_string(m.a1()), formlab::to_string(m.a2()), formlab::to_string(m.a3()),
                      formlab::to_string(m.a4())});
}

json box_json(const BoxBound& b) {
  json j{{"form", b.form}, {"X", b.X}, {"rigorous", b.rigorous}, {"source", to_string(b.source)}};
  j["c_F"] = b.c_F ? json(formlab::to_string(*b.c_F)) : json(nullptr);
  return j;
}

json report_json(const CountReport& r) {
  json boxes = json::array();
  for (const auto& b : r.boxes) boxes.push_back(box_json(b));
  return json{{"count", r.count},       {"B", r.B},
              {"boxes", boxes},         {"rigorous", r.rigorous},
              {"elapsed", r.elapsed},   {"zero_included", r.zero_included},
              {"warning", r.warning}};
}

Table report_table(const CountReport& r) {
  return {{"B", "count", "rigorous", "zero_included", "warning"},
          {{std::to_string(r.B), std::to_string(r.count), r.rigorous ? "true" : "false",
            r.zero_included ? "true" : "false", r.warning}}};
}

json check_json(const CheckOutcome& c) {
  json j{{"name", c.name}, {"parameters", c.parameters}, {"observed", (double)c.observed},
         {"bound", (double)c.bound}, {"pass", c.pass}};
  j["witness"] = c.witness ? json(*c.witness) : json(nullptr);
  return j;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

void print_csv(const Table& t) {
  auto line = [](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) std::cout << (i ? "," : "") << csv_field(cells[i]);
    std::cout << "\n";
  };
  line(t.header);
  for (const auto& r : t.rows) line(r);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"formlab: binary forms, represented values and fundamental-domain areas"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string format = "json";
  int threads = 1;
  std::string seed_text = "0xF0EB";
  app.add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--threads", threads, "worker threads for counting")->envname("FORMLAB_THREADS")->check(CLI::Range(1, 256));
  app.add_option("--seed", seed_text, "seed for randomized sweeps");

  std::string form, form1, form2, family, catalog, B_text, A_text = "0", N_text, Bs_text, exponent_text, gnuplot_path;
  long long box_cap = 0;
  bool rigorous_only = false, star = false, full = false, verify_json = false;
  int d = 0, dmin = 1, dmax = 8, degree_cap = 200;
  long long x = 0, y = 0, denominator_bound = 1000000;
  double tol = 0;
  std::string task = "count-nn", check_name = "all";

  auto counting_flags = [&](CLI::App* sc) {
    sc->add_option("--box-cap", box_cap, "box half-width used when no certified box exists");
    sc->add_flag("--rigorous-only", rigorous_only, "fail unless every box is certified");
  };

  auto* family_list = app.add_subcommand("family-list", "list family members by degree");
  family_list->add_option("--family", family)->required();
  family_list->add_option("--catalog", catalog, "JSON catalog for binom");
  family_list->add_option("--dmin", dmin);
  family_list->add_option("--dmax", dmax);

  auto* eval = app.add_subcommand("eval", "evaluate a form at an integer point");
  eval->add_option("--form", form)->required();
  eval->add_option("--x", x)->required();
  eval->add_option("--y", y)->required();

  auto* count_nn_cmd = app.add_subcommand("count-nn", "values |m| <= B represented by one form");
  count_nn_cmd->add_option("--form", form)->required();
  count_nn_cmd->add_option("--B", B_text)->required();
  counting_flags(count_nn_cmd);

  auto* count_common_cmd = app.add_subcommand("count-common", "values |m| <= N represented by two forms");
  count_common_cmd->add_option("--form1", form1)->required();
  count_common_cmd->add_option("--form2", form2)->required();
  count_common_cmd->add_option("--N", N_text)->required();
  counting_flags(count_common_cmd);

  auto* count_m_cmd = app.add_subcommand("count-m", "the M and M* counts of a pair");
  count_m_cmd->add_option("--form1", form1)->required();
  count_m_cmd->add_option("--form2", form2)->required();
  count_m_cmd->add_option("--B", B_text)->required();
  count_m_cmd->add_flag("--star", star, "count M* instead of M");
  counting_flags(count_m_cmd);

  auto* count_r_cmd = app.add_subcommand("count-r", "values represented by members of degree >= d");
  count_r_cmd->add_option("--family", family)->required();
  count_r_cmd->add_option("--catalog", catalog);
  count_r_cmd->add_option("--d", d)->required();
  count_r_cmd->add_option("--B", B_text)->required();
  count_r_cmd->add_option("--A", A_text);
  count_r_cmd->add_option("--degree-cap", degree_cap);
  counting_flags(count_r_cmd);

  auto* area_cmd = app.add_subcommand("area", "area of |F| <= 1");
  area_cmd->add_option("--form", form)->required();
  area_cmd->add_option("--tol", tol, "default 1e-8 up to degree 10, 1e-6 above");

  auto* coef_cmd = app.add_subcommand("coef", "area sums over the quadratic-product families");
  coef_cmd->add_option("--family", family)->required()->check(CLI::IsMember({"qplus", "qminus"}));
  coef_cmd->add_option("--dmin", dmin);
  coef_cmd->add_option("--dmax", dmax);
  coef_cmd->add_option("--tol", tol, "default 1e-6");

  auto* aut_cmd = app.add_subcommand("aut", "rational automorphism group");
  aut_cmd->add_option("--form", form)->required();

  auto* iso_cmd = app.add_subcommand("iso", "decide rational equivalence of two forms");
  iso_cmd->add_option("--form1", form1)->required();
  iso_cmd->add_option("--form2", form2)->required();
  iso_cmd->add_option("--denominator-bound", denominator_bound);

  auto* exponents_cmd = app.add_subcommand("exponents", "eta, kappa and theta for d = 3..dmax");
  exponents_cmd->add_option("--dmax", dmax);
  exponents_cmd->add_flag("--full", full, "full precision instead of three truncated decimals");

  auto* verify_cmd = app.add_subcommand("verify", "run the inequality and identity checks");
  verify_cmd->add_option("check", check_name, "check name or all");
  verify_cmd->add_flag("--json", verify_json);

  auto* fit_cmd = app.add_subcommand("fit", "count / B^exponent over a list of bounds");
  fit_cmd->add_option("--task", task)->check(CLI::IsMember({"count-nn", "count-common", "count-r"}));
  fit_cmd->add_option("--form", form);
  fit_cmd->add_option("--form1", form1);
  fit_cmd->add_option("--form2", form2);
  fit_cmd->add_option("--family", family);
  fit_cmd->add_option("--catalog", catalog);
  fit_cmd->add_option("--d", d);
  fit_cmd->add_option("--A", A_text);
  fit_cmd->add_option("--Bs", Bs_text, "comma-separated, increasing")->required();
  fit_cmd->add_option("--exponent", exponent_text, "rational; default 2/deg");
  fit_cmd->add_option("--gnuplot", gnuplot_path, "also write a gnuplot script here");
  counting_flags(fit_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << json{{"error", "UsageError"}, {"message", e.what()}}.dump() << "\n";
    return 2;
  }

  const bool csv = format == "csv";
  auto emit = [&](const json& j, const Table& t) {
    if (csv)
      print_csv(t);
    else
      std::cout << j.dump(2) << "\n";
  };

  try {
    const std::uint64_t seed = parse_seed(seed_text);
    CountOptions opt;
    opt.threads = threads;
    opt.box_cap = box_cap;
    opt.degree_cap = degree_cap;
    auto guard = [&](const CountReport& r) {
      if (rigorous_only && !r.rigorous) throw Error("NotRigorous", "a search box is not certified");
      return r;
    };

    if (*family_list) {
      FamilyId fam = read_family(family, catalog);
      json list = json::array();
      Table t{{"name", "degree", "coeffs"}, {}};
      for (int deg = std::max(dmin, 1); deg <= dmax; ++deg)
        for (const auto& m : named_members(fam, deg)) {
          list.push_back({{"name", m.name}, {"degree", deg}, {"coeffs", coeffs_json(m.form)}});
          std::string c;
          for (const auto& q : m.form.coeffs()) c += (c.empty() ? "" : " ") + formlab::to_string(q);
          t.rows.push_back({m.name, std::to_string(deg), c});
        }
      emit(list, t);
    } else if (*eval) {
      BinaryForm F = read_form(form);
      Rat v = F.at(Rat((long)x), Rat((long)y));
      std::string s = formlab::to_string(v);
      emit(json{{"form", form}, {"x", x}, {"y", y}, {"value", s}},
           {{"x", "y", "value"}, {{std::to_string(x), std::to_string(y), s}}});
    } else if (*count_nn_cmd) {
      CountReport r = guard(count_nn(read_form(form), parse_count(B_text, "--B"), opt));
      emit(report_json(r), report_table(r));
    } else if (*count_common_cmd) {
      CountReport r = guard(count_common(read_form(form1), read_form(form2), parse_count(N_text, "--N"), opt));
      emit(report_json(r), report_table(r));
    } else if (*count_m_cmd) {
      CountReport r = guard(count_m(read_form(form1), read_form(form2), parse_count(B_text, "--B"), star, opt));
      emit(report_json(r), report_table(r));
    } else if (*count_r_cmd) {
      CountReport r = guard(count_r(read_family(family, catalog), d, parse_count(B_text, "--B"),
                                    parse_count(A_text, "--A"), opt));
      emit(report_json(r), report_table(r));
    } else if (*area_cmd) {
      BinaryForm F = read_form(form);
      long double t = tol > 0 ? tol : default_area_tol(F.degree());
      QuadratureResult r = area(F, t);
      json pieces = json::array();
      Table table{{"label", "lo", "hi", "value", "error"}, {}};
      for (const auto& p : r.pieces) {
        pieces.push_back({{"label", p.label}, {"lo", num(p.lo)}, {"hi", num(p.hi)}, {"value", (double)p.value},
                          {"error", (double)p.error}});
        table.rows.push_back({p.label, num(p.lo), num(p.hi), num(p.value), num(p.error)});
      }
      emit(json{{"value", (double)r.value}, {"error", (double)r.abs_error_estimate}, {"pieces", pieces}}, table);
    } else if (*coef_cmd) {
      const bool plus = family == "qplus";
      const long double lambda = plus ? to_long_double(qplus_lambda()) : 2.0L;
      const long double pi = std::acos(-1.0L);
      long double t = tol > 0 ? tol : 1e-6L;
      json rows = json::array();
      Table table{{"d", "coef", "lower_bound", "upper_bound", "pass"}, {}};
      bool all = true;
      for (int k = std::max(dmin, 2); k <= dmax; ++k) {
        long double c = (plus ? coef_qplus(k, t) : coef_qminus(k, t)).value;
        long double lower = pi * std::sqrt((long double)k) / std::sqrt(lambda);
        std::optional<long double> upper;
        if (plus) upper = pi * std::sqrt(std::exp(1.0L)) * (std::sqrt((long double)k) + 1);
        bool pass = c > lower && (!upper || c < *upper);
        all = all && pass;
        rows.push_back({{"d", k}, {"coef", (double)c}, {"lower_bound", (double)lower},
                        {"upper_bound", upper ? json((double)*upper) : json(nullptr)}, {"pass", pass}});
        table.rows.push_back({std::to_string(k), num(c), num(lower), upper ? num(*upper) : "", pass ? "true" : "false"});
      }
      emit(rows, table);
      if (!all) return 1;
    } else if (*aut_cmd) {
      AutGroup g = automorphisms(read_form(form));
      json els = json::array();
      Table table{{"a1", "a2", "a3", "a4"}, {}};
      for (const auto& m : g.elements) {
        els.push_back(matrix_json(m));
        table.rows.push_back(matrix_json(m).get<std::vector<std::string>>());
      }
      json j{{"class", to_string(g.classification)}, {"order", g.elements.size()}, {"elements", els},
             {"complete", g.complete}};
      j["W"] = g.classification == AutClass::Other ? json(nullptr) : json(formlab::to_string(w_coeff(g.classification)));
      emit(j, table);
    } else if (*iso_cmd) {
      IsoOptions o;
      o.denominator_bound = denominator_bound;
      IsoVerdict v = is_isomorphic(read_form(form1), read_form(form2), o);
      json j{{"verdict", to_string(v.kind)}};
      j["gamma"] = v.gamma ? matrix_json(*v.gamma) : json(nullptr);
      j["certificate"] = to_string(v.certificate);
      j["prime"] = v.prime;
      j["details"] = v.details;
      std::string gamma = v.gamma ? v.gamma->to_string() : "";
      emit(j, {{"verdict", "gamma", "certificate", "prime", "details"},
               {{to_string(v.kind), gamma, to_string(v.certificate), std::to_string(v.prime), v.details}}});
    } else if (*exponents_cmd) {
      json rows = json::array();
      Table table{{"d", "eta", "kappa", "theta"}, {}};
      for (const auto& r : exponent_table(dmax)) {
        auto show = [&](long double v) { return full ? num(v) : three_decimals(v); };
        rows.push_back({{"d", r.d}, {"eta", show(r.eta)}, {"kappa", show(r.kappa)}, {"theta", show(r.theta)}});
        table.rows.push_back({std::to_string(r.d), show(r.eta), show(r.kappa), show(r.theta)});
      }
      emit(rows, table);
    } else if (*verify_cmd) {
      std::vector<CheckOutcome> out = run_checks(check_name, seed);
      bool all = std::all_of(out.begin(), out.end(), [](const CheckOutcome& c) { return c.pass; });
      if (verify_json || (format == "json" && app.count("--format"))) {
        json list = json::array();
        for (const auto& c : out) list.push_back(check_json(c));
        std::cout << json{{"seed", seed}, {"pass", all}, {"checks", list}}.dump(2) << "\n";
      } else if (csv) {
        Table table{{"name", "parameters", "observed", "bound", "pass"}, {}};
        for (const auto& c : out)
          table.rows.push_back({c.name, c.parameters, num(c.observed), num(c.bound), c.pass ? "true" : "false"});
        print_csv(table);
      } else {
        std::cout << "seed " << seed << "\n";
        for (const auto& c : out) {
          std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << " [" << c.parameters << "] observed=" << num(c.observed)
                    << " bound=" << num(c.bound);
          if (c.witness) std::cout << " witness: " << *c.witness;
          std::cout << "\n";
        }
      }
      return all ? 0 : 1;
    } else if (*fit_cmd) {
      std::vector<long long> Bs;
      std::stringstream ss(Bs_text);
      for (std::string item; std::getline(ss, item, ',');) Bs.push_back(parse_count(item, "--Bs"));
      if (Bs.empty() || !std::is_sorted(Bs.begin(), Bs.end())) throw UsageError("--Bs must be increasing");
      std::function<CountReport(long long)> counter;
      int deg = 0;
      if (task == "count-nn") {
        if (form.empty()) throw UsageError("fit --task count-nn needs --form");
        BinaryForm F = read_form(form);
        deg = F.degree();
        counter = [F, opt](long long B) { return count_nn(F, B, opt); };
      } else if (task == "count-common") {
        if (form1.empty() || form2.empty()) throw UsageError("fit --task count-common needs --form1 and --form2");
        BinaryForm F1 = read_form(form1), F2 = read_form(form2);
        deg = F1.degree();
        counter = [F1, F2, opt](long long B) { return count_common(F1, F2, B, opt); };
      } else {
        if (family.empty() || d < 1) throw UsageError("fit --task count-r needs --family and --d");
        FamilyId fam = read_family(family, catalog);
        long long A = parse_count(A_text, "--A");
        deg = d;
        counter = [fam, d, A, opt](long long B) { return count_r(fam, d, B, A, opt); };
      }
      Rat exponent = exponent_text.empty() ? Rat(2, deg) : parse_rational(exponent_text);
      std::vector<FitRow> rows = fit_report(
          [&](long long B) { return guard(counter(B)); }, Bs, exponent);
      json list = json::array();
      Table table{{"B", "count", "ratio"}, {}};
      for (const auto& r : rows) {
        list.push_back({{"B", r.B}, {"count", r.count}, {"ratio", (double)r.ratio}, {"rigorous", r.rigorous}});
        table.rows.push_back({std::to_string(r.B), std::to_string(r.count), num(r.ratio)});
      }
      emit(list, table);
      if (!gnuplot_path.empty()) {
        std::ofstream g(gnuplot_path);
        if (!g) throw Error("IOError", "cannot write " + gnuplot_path);
        g << "# formlab fit --task " << task << " --exponent " << formlab::to_string(exponent) << "\n"
          << "set datafile separator ','\nset logscale x\nset key autotitle columnhead\n"
          << "set xlabel 'B'\nset ylabel 'count / B^(" << formlab::to_string(exponent) << ")'\n"
          << "plot 'fit.csv' using 1:3 with linespoints\n";
      }
    }
  } catch (const UsageError& e) {
    std::cerr << json{{"error", "UsageError"}, {"message", e.what()}}.dump() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << json{{"error", e.code()}, {"message", e.what()}}.dump() << "\n";
    return e.code() == "ParseError" ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", "InternalError"}, {"message", e.what()}}.dump() << "\n";
    return 1;
  }
  return 0;
}
