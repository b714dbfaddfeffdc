#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "cga/algebra.hpp"
#include "cga/invariants.hpp"

#if defined(__unix__)
#include <sys/resource.h>
#endif

namespace {

using namespace cga;

struct Options {
  std::string ell = "3/2";
  std::string format = "text";
  int parallel = 1;
  std::string output;
};

std::ostream& open_output(const Options& opt, std::ofstream& file) {
  if (opt.output.empty()) return std::cout;
  file.open(opt.output, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open output file " + opt.output);
  return file;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int cmd_verify_algebra(const Options& opt) {
  HalfInt ell = HalfInt::from_string(opt.ell);
  GeneratorSet gens(ell);
  BracketReport rep = verify_commutation_table(gens);
  std::ofstream file;
  std::ostream& os = open_output(opt, file);
  if (opt.format == "json")
    os << rep.to_json_string(ell) << "\n";
  else
    rep.print(os, ell, true);
  return rep.ok() ? 0 : 1;
}

int cmd_verify_invariants(const Options& opt) {
  HalfInt ell = HalfInt::from_string(opt.ell);
  GeneratorSet gens(ell);
  VerifyReport rep;
  if (ell.twice() == 3) {
    Tower32 t = build_tower_32();
    rep.merge(verify_intermediate_lemmas(gens, t));
    rep.merge(verify_full_annihilation(gens, t, opt.parallel));
  } else {
    TowerGeneral t = build_tower_general(ell);
    rep.merge(verify_intermediate_lemmas(gens, t));
    rep.merge(verify_full_annihilation(gens, t, opt.parallel));
  }
  rep.merge(known_discrepancy_warnings(gens));
  std::ofstream file;
  std::ostream& os = open_output(opt, file);
  if (opt.format == "json") {
    os << rep.to_json_string() << "\n";
  } else {
    os << "invariant verification, ell = " << ell.to_string() << "\n";
    rep.print(os, true);
  }
  return rep.ok() ? 0 : 1;
}

int cmd_coeff(const Options& opt) {
  HalfInt ell = HalfInt::from_string(opt.ell);
  CoeffTable table(ell);
  std::ofstream file;
  std::ostream& os = open_output(opt, file);
  os << table.to_json_string() << "\n";
  return 0;
}

void emit_expr(std::ostream& os, const std::string& name, const RatExpr& e, const JetSpace& sp,
               Format f) {
  if (f == Format::Json) return;  // handled by the json collector
  if (f == Format::Latex)
    os << name << " &= " << render(e, sp, f) << " \\\\\n";
  else
    os << name << " = " << render(e, sp, f) << "\n";
}

int cmd_emit(const Options& opt, const std::string& what) {
  HalfInt ell = HalfInt::from_string(opt.ell);
  Format f = format_from_string(opt.format);
  std::ofstream file;
  std::ostream& os = open_output(opt, file);
  nlohmann::ordered_json j;
  j["schema"] = "cga.emit/1";
  j["ell"] = ell.to_string();
  j["what"] = what;

  GeneratorSet gens(ell);
  const JetSpace& sp = gens.space();

  auto add_json = [&](const std::string& name, const RatExpr& e) {
    j[name] = nlohmann::json::parse(render(e, sp, Format::Json));
  };

  if (what == "generators") {
    for (const auto& name : gens.names()) {
      if (f == Format::Json)
        j[name] = nlohmann::json::parse(render_field(gens.field(name), sp, Format::Json));
      else
        os << name << " = " << render_field(gens.field(name), sp, f) << "\n";
    }
    if (f == Format::Json) os << j.dump(2) << "\n";
    return 0;
  }

  if (ell.twice() == 3) {
    Tower32 t = build_tower_32();
    if (what == "phi") {
      for (int i = 0; i < 7; ++i) {
        std::string n = "phi_" + std::to_string(i + 1);
        if (f == Format::Json)
          add_json(n, t.phi[static_cast<size_t>(i)]);
        else
          emit_expr(os, n, t.phi[static_cast<size_t>(i)], sp, f);
      }
    } else if (what == "w") {
      for (int i = 0; i < 6; ++i) {
        std::string n = "w_" + std::to_string(i + 1);
        if (f == Format::Json)
          add_json(n, t.w[static_cast<size_t>(i)]);
        else
          emit_expr(os, n, t.w[static_cast<size_t>(i)], sp, f);
      }
    } else if (what == "final") {
      for (int i = 0; i < 5; ++i) {
        std::string n = "psi_" + std::to_string(i + 1);
        if (f == Format::Json)
          add_json(n, t.psi[static_cast<size_t>(i)]);
        else
          emit_expr(os, n, t.psi[static_cast<size_t>(i)], sp, f);
      }
    } else {
      throw CLI::ValidationError("emit", "no '" + what + "' tower at ell = 3/2");
    }
    if (f == Format::Json) os << j.dump(2) << "\n";
    return 0;
  }

  TowerGeneral t = build_tower_general(ell);
  PhiNamer phin(t.phi_space);
  if (what == "phi") {
    for (const auto& [km, e] : t.phi_km) {
      std::string n = "phi_" + std::to_string(km.first) + std::to_string(km.second);
      if (f == Format::Json)
        add_json(n, e);
      else
        emit_expr(os, n, e, sp, f);
    }
    if (f == Format::Json)
      add_json("phi", t.phi);
    else
      emit_expr(os, "phi", t.phi, sp, f);
  } else if (what == "w") {
    if (f == Format::Json) {
      add_json("w", t.w);
      add_json("w_01", t.w01);
      add_json("w_02", t.w02);
    } else {
      emit_expr(os, "w", t.w, sp, f);
      emit_expr(os, "w_01", t.w01, sp, f);
      emit_expr(os, "w_02", t.w02, sp, f);
    }
  } else if (what == "wkm") {
    for (const auto& [km, p] : t.wkm_phi) {
      std::string n = "w_" + std::to_string(km.first) + std::to_string(km.second);
      if (f == Format::Json)
        j[n] = nlohmann::json::parse(render_poly(p, phin, Format::Json));
      else if (f == Format::Latex)
        os << n << " &= " << render_poly(p, phin, f) << " \\\\\n";
      else
        os << n << " = " << render_poly(p, phin, f) << "\n";
    }
  } else if (what == "final") {
    for (const auto& [km, e] : t.finals) {
      std::string n = "w_" + std::to_string(km.first) + std::to_string(km.second) + "/w^" +
                      std::to_string(t.weight(km.first, km.second));
      if (f == Format::Json)
        add_json(n, e);
      else
        emit_expr(os, n, e, sp, f);
    }
  } else {
    throw CLI::ValidationError("emit", "unknown emit target '" + what + "'");
  }
  if (f == Format::Json) os << j.dump(2) << "\n";
  return 0;
}

int cmd_check(const Options& opt, const std::string& path) {
  HalfInt ell = HalfInt::from_string(opt.ell);
  std::string src;
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    src = ss.str();
  } else {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    src = ss.str();
  }
  GeneratorSet gens(ell);
  RatExpr e;
  try {
    e = parse_expr(src, gens.space());
  } catch (const ParseError& pe) {
    std::cerr << path << ":" << pe.what() << "\n";
    return 1;
  }
  std::ofstream file;
  std::ostream& os = open_output(opt, file);
  nlohmann::ordered_json j;
  j["schema"] = "cga.check/1";
  j["ell"] = ell.to_string();
  std::vector<std::pair<std::string, bool>> rows;
  for (const auto& name : gens.names()) {
    bool zero = rat_is_zero(apply(gens.hat(name), e, gens.space()));
    rows.push_back({name, zero});
  }
  if (opt.format == "json") {
    for (const auto& [name, zero] : rows) j["annihilated_by"][name] = zero;
    os << j.dump(2) << "\n";
  } else {
    os << "candidate at ell = " << ell.to_string() << "\n";
    for (const auto& [name, zero] : rows)
      os << "  hat(" << name << ")F " << (zero ? "= 0" : "!= 0") << "\n";
  }
  return 0;
}

int cmd_bench(const Options& opt) {
  HalfInt ell = HalfInt::from_string(opt.ell);
#if defined(__unix__)
  if (const char* cap = std::getenv("CGA_BENCH_MEM_MB")) {
    rlimit lim{};
    lim.rlim_cur = lim.rlim_max = static_cast<rlim_t>(std::stoul(cap)) * 1024 * 1024;
    setrlimit(RLIMIT_AS, &lim);
  }
#endif
  poly_stats::reset();
  auto t0 = std::chrono::steady_clock::now();
  GeneratorSet gens(ell);
  double t_gens = seconds_since(t0);

  auto t1 = std::chrono::steady_clock::now();
  VerifyReport rep;
  size_t invariants = 0;
  double t_tower = 0;
  if (ell.twice() == 3) {
    Tower32 t = build_tower_32();
    t_tower = seconds_since(t1);
    invariants = 5;
    auto t2 = std::chrono::steady_clock::now();
    rep = verify_full_annihilation(gens, t, opt.parallel);
    std::cout << "verify: " << seconds_since(t2) << " s\n";
  } else {
    TowerGeneral t = build_tower_general(ell);
    t_tower = seconds_since(t1);
    invariants = t.finals.size();
    auto t2 = std::chrono::steady_clock::now();
    rep = verify_full_annihilation(gens, t, opt.parallel);
    std::cout << "verify: " << seconds_since(t2) << " s\n";
  }
  std::cout << "build generators: " << t_gens << " s\n"
            << "build tower: " << t_tower << " s\n"
            << "generators: " << gens.names().size() << ", invariants: " << invariants << "\n"
            << "peak term count: " << poly_stats::peak() << "\n"
            << "total: " << seconds_since(t0) << " s\n";
  return rep.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact symbolic engine for centrally extended conformal Galilei algebras"};
  app.require_subcommand(1);
  app.fallthrough(true);

  Options opt;
  app.add_option("--ell", opt.ell, "half-odd ell as n/2, n odd >= 3")->capture_default_str();
  app.add_option("--format", opt.format, "text|latex|json")->capture_default_str();
  app.add_option("--parallel", opt.parallel, "worker threads (0 = hardware)")->capture_default_str();
  app.add_option("--output", opt.output, "write output to a file instead of stdout");

  auto* va = app.add_subcommand("verify-algebra", "verify the commutation table exactly");
  auto* vi = app.add_subcommand("verify-invariants",
                                "verify annihilation of the invariant towers exactly");
  auto* em = app.add_subcommand("emit", "print towers or generators");
  std::string what = "final";
  em->add_option("--what", what, "phi|w|wkm|final|generators")->capture_default_str();
  auto* co = app.add_subcommand("coeff", "dump the c_ab(k,m), gamma(k,m) table as JSON");
  auto* ch = app.add_subcommand("check", "test a user expression against all prolonged generators");
  std::string check_file;
  ch->add_option("file", check_file, "expression file, '-' for stdin")->required();
  auto* be = app.add_subcommand("bench", "time tower construction and verification");

  CLI11_PARSE(app, argc, argv);

  if (opt.parallel == 0)
    opt.parallel = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  try {
    if (va->parsed()) return cmd_verify_algebra(opt);
    if (vi->parsed()) return cmd_verify_invariants(opt);
    if (em->parsed()) return cmd_emit(opt, what);
    if (co->parsed()) return cmd_coeff(opt);
    if (ch->parsed()) return cmd_check(opt, check_file);
    if (be->parsed()) return cmd_bench(opt);
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
