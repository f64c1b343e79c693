#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "horsmc/cn.hpp"
#include "horsmc/ctl.hpp"
#include "horsmc/proof.hpp"
#include "horsmc/scheme.hpp"

namespace {

using namespace horsmc;

constexpr int kExitYes = 0;
constexpr int kExitNo = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInconclusive = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out << content;
}

// The scheme's terminals and the automaton's alphabet must agree symbol by
// symbol so that label ids line up.
void require_same_terminals(const RankedAlphabet& scheme, const RankedAlphabet& automaton) {
  if (scheme != automaton)
    throw Error("automaton alphabet (" + automaton.to_decl() +
                ") differs from the scheme's terminals (" + scheme.to_decl() + ")");
}

bool is_lifted_of(const RankedAlphabet& sigma, const RankedAlphabet& terminals) {
  if (sigma.size() != terminals.size() + 2) return false;
  for (int i = 0; i < terminals.size(); ++i)
    if (sigma.name(i) != terminals.name(i) || sigma.arity(i) != terminals.arity(i)) return false;
  return sigma.name(terminals.size()) == "R" && sigma.arity(terminals.size()) == 1 &&
         sigma.name(terminals.size() + 1) == "b" && sigma.arity(terminals.size() + 1) == 1;
}

struct CheckArgs {
  std::string scheme_path;
  std::string automaton_path;
  std::string ctl;
  std::string state;
  std::string engine = "auto";
  std::string certificate_path;
  int refute_fuel = 64;
};

int cmd_check(const CheckArgs& args) {
  RecursionScheme scheme = parse_scheme(read_file(args.scheme_path));
  TrivialAutomaton base;
  if (!args.ctl.empty()) {
    base = compile_formula(parse_formula(args.ctl, scheme.terminals), scheme.terminals);
  } else {
    base = parse_automaton(read_file(args.automaton_path));
    require_same_terminals(scheme.terminals, base.alphabet);
  }
  TrivialAutomaton lifted = lift_delays(base);
  LambdaGraph graph = to_lambda_graph(scheme);
  CnMachine machine(graph);
  int q0 = base.initial.empty() ? -1 : base.initial.front();
  if (!args.state.empty()) q0 = lifted.state_index(args.state);
  if (q0 < 0) throw Error("no such state; use --state with one of the automaton's states");
  DecideOptions opts;
  opts.refute_fuel = args.refute_fuel;
  if (args.engine == "exact")
    opts.mode = EngineMode::Exact;
  else if (args.engine == "goal")
    opts.mode = EngineMode::Goal;
  else if (args.engine == "auto")
    opts.mode = EngineMode::Auto;
  else
    throw Error("unknown engine '" + args.engine + "'");
  Verdict verdict = decide(graph, lifted, q0, machine, opts);
  switch (verdict.kind) {
    case Verdict::Kind::Yes: {
      std::cout << "YES\n";
      if (!args.certificate_path.empty()) {
        write_file(args.certificate_path,
                   certificate_to_text(graph, lifted, *verdict.certificate));
        std::cout << "certificate written to " << args.certificate_path << "\n";
      }
      return kExitYes;
    }
    case Verdict::Kind::No:
      std::cout << "NO\n";
      if (verdict.refutation_level)
        std::cout << "no run up to level " << *verdict.refutation_level << "\n";
      return kExitNo;
    case Verdict::Kind::Inconclusive:
      std::cout << "INCONCLUSIVE\n";
      std::cout << "goal engine exhausted its candidates and no failing level was found within "
                   "the refutation fuel\n";
      return kExitInconclusive;
  }
  return kExitUsage;
}

struct NormalizeArgs {
  std::string scheme_path;
  int depth = 5;
  bool keep_delays = false;
  int fuel = 1000;
};

int cmd_normalize(const NormalizeArgs& args) {
  RecursionScheme scheme = parse_scheme(read_file(args.scheme_path));
  LambdaGraph graph = to_lambda_graph(scheme);
  CnMachine machine(graph);
  SourcePtr nf = machine.normal_form();
  if (args.keep_delays) {
    PrefixTree prefix = expand_prefix(nf, args.depth);
    std::cout << print_prefix(machine.sigma(), prefix) << "\n";
    return kExitYes;
  }
  EraseResult erased =
      erase_delays(machine.delay_r(), machine.delay_b(), nf, args.depth, args.fuel);
  if (!erased.ok) {
    std::cout << "timeout: more than " << args.fuel
              << " consecutive delay constructors on the branch at path ";
    if (erased.stuck_path.empty()) {
      std::cout << "(root)";
    } else {
      for (size_t i = 0; i < erased.stuck_path.size(); ++i)
        std::cout << (i ? "." : "") << erased.stuck_path[i];
    }
    std::cout << "\n";
    return kExitInconclusive;
  }
  std::cout << print_prefix(scheme.terminals, erased.prefix) << "\n";
  return kExitYes;
}

Projection parse_map(const TrivialAutomaton& a, const std::string& map_text) {
  // old=new pairs, comma separated; unmapped symbols stay put
  RankedAlphabet target = a.alphabet;
  std::vector<int> map(a.alphabet.size());
  for (int i = 0; i < a.alphabet.size(); ++i) map[i] = i;
  std::istringstream ss(map_text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw Error("bad --map entry '" + item + "', expected old=new");
    std::string from = item.substr(0, eq), to = item.substr(eq + 1);
    int f = a.alphabet.require(from);
    int t = target.index_of(to);
    if (t < 0) t = target.add_symbol(to, a.alphabet.arity(f));
    map[f] = t;
  }
  return Projection::make(a.alphabet, target, map);
}

int cmd_automaton(const std::string& op, const std::vector<std::string>& inputs,
                  const std::string& out_path, const std::string& map_text) {
  std::vector<TrivialAutomaton> ins;
  for (const auto& p : inputs) ins.push_back(parse_automaton(read_file(p)));
  TrivialAutomaton result;
  auto need = [&](size_t n) {
    if (ins.size() != n)
      throw Error("'" + op + "' expects " + std::to_string(n) + " input automata");
  };
  if (op == "union") {
    need(2);
    result = union_automaton(ins[0], ins[1]);
  } else if (op == "intersect") {
    need(2);
    result = intersection_automaton(ins[0], ins[1]);
  } else if (op == "project") {
    need(1);
    if (map_text.empty()) throw Error("'project' needs --map old=new[,old=new...]");
    result = project_automaton(ins[0], parse_map(ins[0], map_text));
  } else if (op == "ex") {
    need(1);
    result = lift_ex(ins[0]);
  } else if (op == "ax") {
    need(1);
    result = lift_ax(ins[0]);
  } else if (op == "eg") {
    need(1);
    result = lift_eg(ins[0]);
  } else if (op == "ag") {
    need(1);
    result = lift_ag(ins[0]);
  } else if (op == "lift-delays") {
    need(1);
    result = lift_delays(ins[0]);
  } else {
    throw Error("unknown automaton operation '" + op + "'");
  }
  std::string text = to_text(result);
  if (out_path.empty())
    std::cout << text;
  else
    write_file(out_path, text);
  return kExitYes;
}

struct OracleArgs {
  std::string scheme_path;
  std::string automaton_path;
  std::string state;
  int level = 0;
  bool erase = false;
  int fuel = 1000;
};

int cmd_oracle(const OracleArgs& args) {
  RecursionScheme scheme = parse_scheme(read_file(args.scheme_path));
  TrivialAutomaton automaton = parse_automaton(read_file(args.automaton_path));
  LambdaGraph graph = to_lambda_graph(scheme);
  CnMachine machine(graph);
  SourcePtr tree = machine.normal_form();
  if (args.erase) {
    if (automaton.alphabet != scheme.terminals &&
        !is_lifted_of(automaton.alphabet, scheme.terminals))
      throw Error("automaton alphabet does not cover the scheme's terminals");
    tree = erase_delays_source(machine.delay_r(), machine.delay_b(), tree, args.fuel);
  } else {
    if (!is_lifted_of(automaton.alphabet, scheme.terminals))
      throw Error("automaton must be delay-lifted (apply 'automaton lift-delays') or use --erase");
  }
  int q = args.state.empty() ? (automaton.initial.empty() ? -1 : automaton.initial.front())
                             : automaton.state_index(args.state);
  if (q < 0) throw Error("unknown state");
  std::optional<RunLabeling> run;
  try {
    run = run_up_to(automaton, tree, args.level, q);
  } catch (const ErasureTimeout&) {
    std::cout << "timeout while erasing delays\n";
    return kExitInconclusive;
  }
  if (!run) {
    std::cout << "no run\n";
    return kExitNo;
  }
  const RankedAlphabet& alpha = automaton.alphabet;
  std::vector<std::string> paths(run->tree.nodes.size());
  paths[0] = "";
  for (size_t i = 0; i < run->tree.nodes.size(); ++i) {
    const auto& node = run->tree.nodes[i];
    for (size_t c = 0; c < node.children.size(); ++c)
      paths[node.children[c]] = paths[i].empty() ? std::to_string(c)
                                                 : paths[i] + "." + std::to_string(c);
    std::cout << (paths[i].empty() ? "(root)" : paths[i]) << " " << alpha.name(node.label) << " "
              << automaton.states[run->state[i]] << "\n";
  }
  return kExitYes;
}

int cmd_verify(const std::string& cert_path, const std::string& scheme_path,
               const std::string& automaton_path) {
  RecursionScheme scheme = parse_scheme(read_file(scheme_path));
  TrivialAutomaton automaton = parse_automaton(read_file(automaton_path));
  if (automaton.alphabet == scheme.terminals)
    automaton = lift_delays(automaton);
  else if (!is_lifted_of(automaton.alphabet, scheme.terminals))
    throw Error("automaton alphabet does not match the scheme's terminals");
  LambdaGraph graph = to_lambda_graph(scheme);
  Certificate cert = parse_certificate(read_file(cert_path), graph, automaton);
  auto violations = verify_certificate(graph, automaton, cert);
  if (violations.empty()) {
    std::cout << "ok\n";
    return kExitYes;
  }
  for (const auto& v : violations) std::cout << "violation: " << v << "\n";
  return kExitNo;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"horsmc: safety model checking of higher-order recursion schemes"};
  app.require_subcommand(1);

  CheckArgs check_args;
  auto* check = app.add_subcommand(
      "check", "Decide whether the automaton has an infinite run on the scheme's tree");
  check->add_option("scheme", check_args.scheme_path, "scheme file (.hors)")->required();
  check->add_option("--automaton", check_args.automaton_path, "automaton file (.ta)");
  check->add_option("--ctl", check_args.ctl, "safety CTL formula instead of an automaton file");
  check->add_option("--state", check_args.state, "starting state (default: first initial)");
  check->add_option("--engine", check_args.engine, "exact | goal | auto (default auto)");
  check->add_option("--certificate", check_args.certificate_path, "write the certificate here");
  check->add_option("--refute-fuel", check_args.refute_fuel, "bounded-run refuter fuel");

  NormalizeArgs norm_args;
  auto* normalize = app.add_subcommand("normalize", "Print a prefix of the continuous normal form");
  normalize->add_option("scheme", norm_args.scheme_path, "scheme file (.hors)")->required();
  normalize->add_option("--depth", norm_args.depth, "prefix depth");
  normalize->add_flag("--keep-delays", norm_args.keep_delays, "keep R/b delay constructors");
  normalize->add_option("--fuel", norm_args.fuel, "max consecutive delays to erase per branch");

  std::string auto_op, auto_out, auto_map;
  std::vector<std::string> auto_inputs;
  auto* automaton = app.add_subcommand("automaton", "Closure constructions on automata");
  automaton->add_option("op", auto_op, "union|intersect|project|ex|ax|eg|ag|lift-delays")
      ->required();
  automaton->add_option("inputs", auto_inputs, "input automaton files")->required();
  automaton->add_option("-o,--output", auto_out, "output file (stdout if absent)");
  automaton->add_option("--map", auto_map, "projection map old=new[,old=new...]");

  OracleArgs oracle_args;
  auto* oracle = app.add_subcommand("oracle", "Bounded run search on the normal form");
  oracle->add_option("scheme", oracle_args.scheme_path, "scheme file (.hors)")->required();
  oracle->add_option("--automaton", oracle_args.automaton_path, "automaton file")->required();
  oracle->add_option("--state", oracle_args.state, "starting state");
  oracle->add_option("--level", oracle_args.level, "run level")->required();
  oracle->add_flag("--erase", oracle_args.erase, "erase delays before running");
  oracle->add_option("--fuel", oracle_args.fuel, "delay-erasure fuel");

  std::string verify_cert, verify_scheme, verify_automaton;
  auto* verify = app.add_subcommand("verify", "Check an annotation certificate");
  verify->add_option("certificate", verify_cert, "certificate file (.cert)")->required();
  verify->add_option("scheme", verify_scheme, "scheme file (.hors)")->required();
  verify->add_option("automaton", verify_automaton, "automaton file (.ta)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*check) return cmd_check(check_args);
    if (*normalize) return cmd_normalize(norm_args);
    if (*automaton) return cmd_automaton(auto_op, auto_inputs, auto_out, auto_map);
    if (*oracle) return cmd_oracle(oracle_args);
    if (*verify) return cmd_verify(verify_cert, verify_scheme, verify_automaton);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
