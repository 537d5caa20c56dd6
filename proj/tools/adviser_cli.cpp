// adviser: command-line front end for the adviser synthesis library.
//
// Exit codes: 0 success, 1 domain error, 2 usage error.

#include <cstdlib>
#include <deque>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "adviser/adviser.hpp"
#include "adviser/http.hpp"

namespace {

using namespace adviser;

Arena load_arena(const std::string& path) { return parse_arena(read_file(path)); }

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
  } else {
    write_file(out, text);
  }
}

std::string join(const InputSet& inputs) {
  std::string s = "{";
  for (const auto& u : inputs) s += (s.size() > 1 ? "," : "") + u;
  return s + "}";
}

int cmd_validate(const std::string& file, bool strict) {
  const auto report = validate(load_arena(file), strict);
  for (const auto& v : report) {
    std::cout << (v.severity == Severity::error ? "error" : "warning") << ' ' << v.rule << ' ' << v.subject << ": "
              << v.message << "\n";
  }
  if (has_errors(report)) return 1;
  std::cout << "ok\n";
  return 0;
}

int cmd_nominal(const std::string& file, bool ladder) {
  const auto arena = load_arena(file);
  const auto result = nominal_adviser(arena);
  if (ladder) {
    for (std::size_t k = 0; k < result.ladder.levels.size(); ++k) {
      std::cout << "# level " << k << ':';
      for (const auto& s : result.ladder.levels[k]) std::cout << ' ' << s;
      std::cout << "\n";
    }
  }
  std::cout << serialize_adviser(result.adviser);
  return 0;
}

int cmd_enumerate(const std::string& file, std::size_t cap) {
  const auto bundle = enumerate_candidates(load_arena(file), cap);
  std::cout << "free " << bundle.free_choices.size() << " generated " << bundle.generated << " truncated "
            << (bundle.truncated ? "yes" : "no") << "\n";
  for (std::size_t i = 0; i < bundle.candidates.size(); ++i) {
    const auto& rec = bundle.candidates[i];
    std::cout << i << ' ' << (rec.good ? "good" : "bad") << " forbidden " << rec.adviser.total() << "\n";
  }
  return 0;
}

int cmd_solve(const std::string& file, std::size_t cap, const std::string& out) {
  const auto bundle = synthesize(load_arena(file), cap);
  const auto text = serialize_bundle(bundle);
  if (out.empty()) {
    std::cout << text;
  } else {
    write_file(out, text);
    std::cout << "best " << *bundle.best_index << " lambda " << bundle.best().lambda->str() << " candidates "
              << bundle.candidates.size() << (bundle.truncated ? " truncated" : "") << "\n";
  }
  return 0;
}

int cmd_simulate(const std::string& file, const std::string& policy_text, long steps, std::size_t cap) {
  AdversaryPolicy chooser = policy::WorstCase{};
  std::optional<std::deque<ScriptMove>> script;
  if (policy_text == "worst") {
  } else if (policy_text.rfind("random:", 0) == 0) {
    chooser = policy::CompliantRandom{std::stoull(policy_text.substr(7))};
  } else if (policy_text.rfind("script:", 0) == 0) {
    const auto moves = parse_script(read_file(policy_text.substr(7)));
    script.emplace(moves.begin(), moves.end());
  } else {
    std::cerr << "unknown policy '" << policy_text << "'\n";
    return 2;
  }

  auto bundle = std::make_shared<const SolveBundle>(synthesize(load_arena(file), cap));
  auto session = Session::start(bundle);
  std::cout << "start " << session.current_state() << " adviser " << session.current_adviser() << " lambda "
            << session.current_candidate().lambda->str() << "\n";

  for (long k = 1; k <= steps && session.halted() == Halt::no; ++k) {
    if (script && script->empty()) break;
    StepEvent ev;
    if (session.current_owner() == Owner::protagonist) {
      ev = session.protagonist_step();
      if (script) {
        const auto move = script->front();
        if (move.actor != Owner::protagonist || move.input != ev.input) {
          throw Error(ErrorCode::precondition,
                      "script expects '" + move.input + "' but the protagonist played '" + ev.input + "'");
        }
        script->pop_front();
      }
    } else {
      const auto packet = session.advice();
      std::cout << "advice " << packet.state << " hard " << join(packet.hard) << " soft " << join(packet.soft)
                << " allowed " << join(packet.allowed) << "\n";
      if (script) {
        const auto move = script->front();
        if (move.actor != Owner::adversary) {
          throw Error(ErrorCode::precondition, "script has a protagonist move '" + move.input + "' at an adversary state");
        }
        script->pop_front();
        ev = session.adversary_step(move.input);
      } else {
        ev = session.auto_adversary(chooser);
      }
    }
    std::cout << k << ' ' << owner_tag(ev.actor) << ' ' << ev.input << ' ' << ev.from << " -> " << ev.to << ' '
              << to_string(ev.outcome);
    if (ev.new_adviser) {
      std::cout << " switch " << *ev.new_adviser << " lambda " << bundle->candidates[*ev.new_adviser].lambda->str();
    }
    std::cout << "\n";
  }
  std::cout << "end " << session.current_state() << " halted " << to_string(session.halted()) << " rounds "
            << session.rounds() << " average " << session.running_average().str() << "\n";
  return 0;
}

struct DotFlags {
  std::string adviser_file;
  bool nominal = false;
  bool losing = false;
  std::string strategy_file;
  bool nominal_strategy = false;
  std::string current;
  std::string out;
};

int cmd_export_dot(const std::string& file, const DotFlags& flags) {
  const auto arena = load_arena(file);
  DotOverlay overlay;
  if (!flags.adviser_file.empty()) overlay.adviser = parse_adviser(read_file(flags.adviser_file));
  if (flags.nominal) overlay.adviser = nominal_adviser(arena).adviser;
  if (flags.losing) overlay.losing = compute_losing(arena).final;
  if (!flags.strategy_file.empty()) overlay.strategy = parse_strategy(read_file(flags.strategy_file));
  if (flags.nominal_strategy) overlay.strategy = evaluate(arena, nominal_adviser(arena).adviser).report.strategy;
  if (!flags.current.empty()) overlay.current = flags.current;
  emit(export_dot(arena, overlay), flags.out);
  return 0;
}

int cmd_serve(int port, std::size_t cap) {
  if (port < 0) {
    const char* env = std::getenv("ADVISER_PORT");
    port = env ? std::atoi(env) : 8080;
  }
  AdviceService service(cap);
  httplib::Server server;
  mount(server, service);
  std::cout << "listening on 127.0.0.1:" << port << std::endl;
  if (!server.listen("127.0.0.1", port)) {
    std::cerr << "cannot bind port " << port << "\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Least-limiting adviser synthesis for safety games"};
  app.require_subcommand(1);

  std::string file, out, adviser_file, strategy_file, policy_spec = "worst";
  bool strict = false, ladder = false;
  std::size_t cap = default_cap;
  long steps = 100;
  int port = -1;
  DotFlags dot;

  auto* validate_cmd = app.add_subcommand("validate", "check arena well-formedness");
  validate_cmd->add_option("file", file)->required();
  validate_cmd->add_flag("--strict", strict, "also report non-injective transitions");

  auto* transform_cmd = app.add_subcommand("transform", "insert pass states so turns alternate");
  transform_cmd->add_option("file", file)->required();
  transform_cmd->add_option("--out", out);

  auto* nominal_cmd = app.add_subcommand("nominal", "Losing set and nominal adviser");
  nominal_cmd->add_option("file", file)->required();
  nominal_cmd->add_flag("--ladder", ladder, "print the Losing levels");

  auto* enumerate_cmd = app.add_subcommand("enumerate", "list candidate advisers");
  enumerate_cmd->add_option("file", file)->required();
  enumerate_cmd->add_option("--cap", cap)->check(CLI::PositiveNumber);

  auto* solve_cmd = app.add_subcommand("solve", "synthesize the least-limiting adviser");
  solve_cmd->add_option("file", file)->required();
  solve_cmd->add_option("--cap", cap)->check(CLI::PositiveNumber);
  solve_cmd->add_option("--out", out, "bundle file");

  auto* lambda_cmd = app.add_subcommand("lambda", "level of limitation of an adviser");
  lambda_cmd->add_option("file", file)->required();
  lambda_cmd->add_option("--adviser", adviser_file)->required();

  auto* gamma_cmd = app.add_subcommand("gamma", "limitation under a fixed protagonist strategy");
  gamma_cmd->add_option("file", file)->required();
  gamma_cmd->add_option("--adviser", adviser_file)->required();
  gamma_cmd->add_option("--strategy", strategy_file)->required();

  auto* simulate_cmd = app.add_subcommand("simulate", "run a guided session");
  simulate_cmd->add_option("file", file)->required();
  simulate_cmd->add_option("--policy", policy_spec, "worst | random:SEED | script:FILE");
  simulate_cmd->add_option("--steps", steps)->check(CLI::NonNegativeNumber);
  simulate_cmd->add_option("--cap", cap)->check(CLI::PositiveNumber);

  std::string fixture_name;
  auto* fixture_cmd = app.add_subcommand("fixture", "print a built-in arena");
  fixture_cmd->add_option("name", fixture_name)->required();
  fixture_cmd->add_option("--out", out);

  std::string template_file;
  auto* gen_cmd = app.add_subcommand("gen-manufacturing", "expand a manufacturing template ('default' for the built-in)");
  gen_cmd->add_option("template", template_file)->required();
  gen_cmd->add_option("--out", out);

  auto* dot_cmd = app.add_subcommand("export-dot", "Graphviz export with optional overlays");
  dot_cmd->add_option("file", file)->required();
  dot_cmd->add_option("--adviser", dot.adviser_file, "adviser document");
  dot_cmd->add_flag("--nominal", dot.nominal, "overlay the nominal adviser");
  dot_cmd->add_flag("--losing", dot.losing, "overlay the Losing set");
  dot_cmd->add_option("--strategy", dot.strategy_file, "strategy document");
  dot_cmd->add_flag("--nominal-strategy", dot.nominal_strategy, "overlay the optimal strategy under the nominal adviser");
  dot_cmd->add_option("--current", dot.current, "highlight a state");
  dot_cmd->add_option("--out", dot.out);

  auto* serve_cmd = app.add_subcommand("serve", "start the advice service");
  serve_cmd->add_option("--port", port, "defaults to $ADVISER_PORT or 8080");
  serve_cmd->add_option("--cap", cap)->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*validate_cmd) return cmd_validate(file, strict);
    if (*transform_cmd) {
      emit(serialize_arena(alternation_transform(load_arena(file))), out);
      return 0;
    }
    if (*nominal_cmd) return cmd_nominal(file, ladder);
    if (*enumerate_cmd) return cmd_enumerate(file, cap);
    if (*solve_cmd) return cmd_solve(file, cap, out);
    if (*lambda_cmd) {
      std::cout << lambda(load_arena(file), parse_adviser(read_file(adviser_file))).str() << "\n";
      return 0;
    }
    if (*gamma_cmd) {
      std::cout << gamma(load_arena(file), parse_adviser(read_file(adviser_file)), parse_strategy(read_file(strategy_file)))
                       .str()
                << "\n";
      return 0;
    }
    if (*simulate_cmd) return cmd_simulate(file, policy_spec, steps, cap);
    if (*fixture_cmd) {
      emit(serialize_arena(fixture(fixture_name)), out);
      return 0;
    }
    if (*gen_cmd) {
      const auto tmpl = template_file == "default" ? default_manufacturing_template() : parse_template(read_file(template_file));
      emit(serialize_arena(generate_manufacturing(tmpl)), out);
      return 0;
    }
    if (*dot_cmd) return cmd_export_dot(file, dot);
    if (*serve_cmd) return cmd_serve(port, cap);
  } catch (const DocumentError& e) {
    std::cerr << "error: " << to_string(e.code()) << " at " << e.line() << ':' << e.column() << ": " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
    return 1;
  }
  return 2;
}
