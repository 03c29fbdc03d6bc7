#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "shiftforge/shiftforge.hpp"

namespace sf = shiftforge;

namespace {

std::string read_input(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  std::ifstream in(path, std::ios::binary);
  if (!in) throw sf::FormatError("cannot read '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw sf::FormatError("cannot write '" + path + "'");
}

std::vector<sf::RingElement> parse_vector(const sf::RingSpec& ring, const std::string& text) {
  std::vector<sf::RingElement> out;
  if (text.empty()) return out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(sf::parse_element(ring, item));
  if (text.back() == ',') throw sf::FormatError("trailing comma in '" + text + "'");
  return out;
}

sf::RingSpec parse_ring_flag(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos) return sf::parse_ring_tokens(text, nullptr);
  std::string kind = text.substr(0, colon), mod = text.substr(colon + 1);
  return sf::parse_ring_tokens(kind, &mod);
}

sf::EquationSystem require_sparse(const sf::SystemFile& f) {
  if (!std::holds_alternative<sf::EquationSystem>(f.system))
    throw sf::PreconditionError("expected a sparse equation system");
  return std::get<sf::EquationSystem>(f.system);
}

sf::RingElement gamma_of(const std::string& text) {
  return text.empty() ? sf::default_gamma() : sf::parse_element(sf::RingSpec::integers(), text);
}

struct SearchFlags {
  bool exhaustive = false;
  std::int64_t box = -1;
  bool zero_sum = false;
  std::size_t support_last = 0;
  bool nonconstant = false;

  void add_domain(CLI::App* cmd) {
    auto* ex = cmd->add_flag("--exhaustive", exhaustive, "Enumerate the whole finite ring");
    auto* bx = cmd->add_option("--box", box, "Integer box [-B, B]")->check(CLI::NonNegativeNumber);
    ex->excludes(bx);
  }

  sf::SearchDomain domain(unsigned jobs, std::uint64_t cap) const {
    if (!exhaustive && box < 0) throw sf::FormatError("give --exhaustive or --box B");
    sf::SearchDomain d = exhaustive ? sf::SearchDomain::exhaustive() : sf::SearchDomain::integer_box(box);
    d.with_jobs(jobs).with_cap(cap);
    if (zero_sum) d.zero_sum();
    if (support_last > 0) d.supported_on_last(support_last);
    return d;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparsifying-shift reductions and brute-force checks over exact rings"};
  app.require_subcommand(1);
  app.fallthrough();
  unsigned jobs = 1;
  std::uint64_t point_cap = sf::kDefaultPointCap;
  app.add_option("--jobs", jobs, "Worker threads for enumeration")->check(CLI::PositiveNumber);
  app.add_option("--point-cap", point_cap, "Maximum enumerated points");

  std::string input, out_path, witness_path, by, gamma_text, e0_text;
  std::size_t copies = 1;
  SearchFlags search;

  auto* sparsity = app.add_subcommand("sparsity", "Print the number of monomials");
  sparsity->add_option("poly", input)->required();

  auto* shift = app.add_subcommand("shift", "Shift a polynomial by a vector");
  shift->add_option("poly", input)->required();
  shift->add_option("--by", by, "Comma-separated shift vector")->required();
  shift->add_option("-o", out_path);

  auto* quadratize = app.add_subcommand("quadratize", "Lower a system to quadratic binomials and affine equations");
  quadratize->add_option("system", input)->required();
  quadratize->add_option("-o", out_path);

  auto* normalize = app.add_subcommand("normalize", "Leave a single constant-bearing equation");
  normalize->add_option("system", input)->required();
  normalize->add_option("-o", out_path);

  auto* reduce_hn = app.add_subcommand("reduce-hn", "Build the sparsifying-shift instance of a system over Z");
  reduce_hn->add_option("system", input)->required();
  reduce_hn->add_option("--gamma", gamma_text);
  reduce_hn->add_option("-o", out_path);
  reduce_hn->add_option("--witness", witness_path);

  auto* reduce_max3lin = app.add_subcommand("reduce-max3lin", "Build the quadratic polynomial of a Max-3Lin instance");
  reduce_max3lin->add_option("lin", input)->required();
  reduce_max3lin->add_option("--e0", e0_text);
  reduce_max3lin->add_option("-o", out_path);

  auto* amplify = app.add_subcommand("amplify", "Multiply disjoint copies of a polynomial");
  amplify->add_option("poly", input)->required();
  amplify->add_option("--copies", copies)->required()->check(CLI::PositiveNumber);
  amplify->add_option("-o", out_path);

  auto* search_shift = app.add_subcommand("search-shift", "Minimum sparsity over a shift domain");
  search_shift->add_option("poly", input)->required();
  search.add_domain(search_shift);
  auto* zs = search_shift->add_flag("--zero-sum", search.zero_sum, "First coordinate is minus the sum of the rest");
  auto* sl = search_shift->add_option("--support-last", search.support_last, "Shift only the last n coordinates")
                 ->check(CLI::PositiveNumber);
  zs->excludes(sl);
  search_shift->add_flag("--nonconstant", search.nonconstant, "Count only non-constant monomials");

  auto* solve = app.add_subcommand("solve", "Least common root in a domain");
  solve->add_option("system", input)->required();
  search.add_domain(solve);

  auto* maxsat = app.add_subcommand("maxsat", "Maximum number of satisfiable rows");
  maxsat->add_option("lin", input)->required();
  search.add_domain(maxsat);

  std::int64_t box = 0;
  auto* verify_hn = app.add_subcommand("verify-hn", "Bounded solution/shift round trip");
  verify_hn->add_option("system", input)->required();
  verify_hn->add_option("--box", box)->required()->check(CLI::NonNegativeNumber);
  verify_hn->add_option("--gamma", gamma_text);

  auto* verify_max3lin = app.add_subcommand("verify-max3lin", "Exhaustive check of min sparsity = 4m - maxsat");
  verify_max3lin->add_option("lin", input)->required();

  std::string eps_text, delta_text, target_text;
  std::uint64_t m = 0, sigma = 0;
  auto* gap = app.add_subcommand("gap-params", "Gap and thresholds of the Max-3Lin reduction");
  gap->add_option("--epsilon", eps_text)->required();
  gap->add_option("--delta", delta_text)->required();
  gap->add_option("-m", m)->required();
  auto* tg = gap->add_option("--target-gap", target_text);
  auto* sg = gap->add_option("--sigma", sigma);
  tg->needs(sg);
  sg->needs(tg);

  std::size_t gen_n = 0, gen_m = 0, noise = 0;
  std::uint64_t seed = 0;
  std::string ring_text;
  bool planted = false;
  auto* gen = app.add_subcommand("gen-max3lin", "Seeded random Max-3Lin instance");
  gen->add_option("--n", gen_n)->required();
  gen->add_option("--m", gen_m)->required();
  gen->add_option("--ring", ring_text)->required();
  gen->add_flag("--planted", planted);
  gen->add_option("--noise", noise);
  gen->add_option("--seed", seed)->required();
  gen->add_option("-o", out_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (sparsity->parsed()) {
      auto f = sf::parse_poly_file(read_input(input));
      std::cout << f.poly.sparsity() << '\n';
    } else if (shift->parsed()) {
      auto f = sf::parse_poly_file(read_input(input));
      auto a = parse_vector(f.poly.ring(), by);
      write_output(out_path, sf::to_text(f.poly.shift(a), f.meta));
    } else if (quadratize->parsed()) {
      auto f = sf::parse_system_file(read_input(input));
      sf::Quadratized q = std::holds_alternative<sf::EquationSystem>(f.system)
                              ? sf::quadratize_sparse(std::get<sf::EquationSystem>(f.system))
                              : sf::quadratize_circuit(std::get<sf::CircuitSystem>(f.system));
      write_output(out_path, sf::to_text(q.system, &q.recipe));
    } else if (normalize->parsed()) {
      auto f = sf::parse_system_file(read_input(input));
      auto norm = sf::normalize_constants(require_sparse(f));
      write_output(out_path, sf::to_text(norm.system, f.recipe ? &*f.recipe : nullptr, norm.trivially_solvable));
    } else if (reduce_hn->parsed()) {
      auto f = sf::parse_system_file(read_input(input));
      auto gamma = gamma_of(gamma_text);
      auto red = std::holds_alternative<sf::EquationSystem>(f.system)
                     ? sf::reduce_hn(std::get<sf::EquationSystem>(f.system), gamma)
                     : sf::reduce_hn(std::get<sf::CircuitSystem>(f.system), gamma);
      if (auto* triv = std::get_if<sf::TriviallySolvable>(&red)) {
        sf::Report r;
        r.add("status", "trivially_solvable");
        r.add("certificate", sf::detail::vector_text(triv->certificate));
        std::cout << r.to_text();
      } else {
        const auto& inst = std::get<sf::HNInstance>(red);
        sf::PolyFileMeta meta;
        meta.shiftable = inst.N() + 1;
        write_output(out_path, sf::to_text(inst.polynomial, meta));
        if (!witness_path.empty()) write_output(witness_path, sf::to_text(inst.witness));
      }
    } else if (reduce_max3lin->parsed()) {
      auto l = sf::parse_max3lin_file(read_input(input));
      auto e0 = e0_text.empty() ? l.ring().one() : sf::parse_element(l.ring(), e0_text);
      write_output(out_path, sf::to_text(sf::build_Q_S(l, e0).polynomial));
    } else if (amplify->parsed()) {
      auto f = sf::parse_poly_file(read_input(input));
      auto inst = sf::amplify(f.poly, copies);
      sf::PolyFileMeta meta;
      meta.copies = std::make_pair(copies, f.poly.nvars());
      write_output(out_path, sf::to_text(inst.polynomial, meta));
    } else if (search_shift->parsed()) {
      auto f = sf::parse_poly_file(read_input(input));
      auto metric = search.nonconstant ? sf::Metric::Nonconstant : sf::Metric::Total;
      auto rep = sf::search_min_sparsity(f.poly, search.domain(jobs, point_cap), metric, f.meta.shiftable);
      std::cout << rep.report().to_text();
    } else if (solve->parsed()) {
      auto f = sf::parse_system_file(read_input(input));
      auto dom = search.domain(jobs, point_cap);
      auto rep = std::holds_alternative<sf::EquationSystem>(f.system)
                     ? sf::solve_system(std::get<sf::EquationSystem>(f.system), dom)
                     : sf::solve_system(std::get<sf::CircuitSystem>(f.system), dom);
      std::cout << rep.report().to_text();
    } else if (maxsat->parsed()) {
      auto l = sf::parse_max3lin_file(read_input(input));
      std::cout << sf::maxsat(l, search.domain(jobs, point_cap)).report().to_text();
    } else if (verify_hn->parsed()) {
      auto f = sf::parse_system_file(read_input(input));
      auto gamma = gamma_of(gamma_text);
      auto rep = std::holds_alternative<sf::EquationSystem>(f.system)
                     ? sf::verify_hn_roundtrip(std::get<sf::EquationSystem>(f.system), gamma, box, jobs, point_cap)
                     : sf::verify_hn_roundtrip(std::get<sf::CircuitSystem>(f.system), gamma, box, jobs, point_cap);
      std::cout << rep.report().to_text();
    } else if (verify_max3lin->parsed()) {
      auto l = sf::parse_max3lin_file(read_input(input));
      std::cout << sf::verify_max3lin(l, jobs, point_cap).report().to_text();
    } else if (gap->parsed()) {
      auto eps = sf::parse_rational(eps_text), delta = sf::parse_rational(delta_text);
      std::size_t d = 1;
      if (!target_text.empty()) d = sf::choose_d(sigma, sf::parse_rational(target_text));
      auto g = sf::gap_params(eps, delta, m, d);
      sf::Report r;
      r.add("alpha", sf::rational_text(g.alpha));
      r.add("gap", g.valid ? "yes" : "no");
      if (!target_text.empty()) {
        r.add("d", std::to_string(g.d));
        r.add("t_yes", g.t_yes.str());
        r.add("t_no", g.t_no.str());
      }
      std::cout << r.to_text();
    } else if (gen->parsed()) {
      auto l = sf::gen_max3lin(gen_n, gen_m, parse_ring_flag(ring_text), planted, noise, seed);
      write_output(out_path, sf::to_text(l));
    }
  } catch (const sf::FormatError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const sf::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const sf::CapExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  }
  return 0;
}
