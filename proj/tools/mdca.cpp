#include "mdca/commands.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <regex>

using namespace mdca;

namespace {

void write_json(const std::string &path, const Json &j)
{
  if (path.empty())
    return;
  if (path == "-") {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream out(path);
  if (!out)
    throw InputError(path + ": cannot write");
  out << j.dump(2) << "\n";
}

std::pair<int, int> parse_window(const std::string &s)
{
  static const std::regex re(R"(^\s*(-?\d+)\s*\.\.\s*(-?\d+)\s*$)");
  std::smatch m;
  if (!std::regex_match(s, m, re))
    throw InputError("--window: expected a..b, got \"" + s + "\"");
  int a = std::stoi(m[1].str()), b = std::stoi(m[2].str());
  if (a > b)
    throw InputError("--window: empty range " + s);
  return {a, b};
}

int emit(const Report &r, const std::string &json_path)
{
  const Json j = r.to_json();
  if (json_path != "-")
    std::cout << render_text(j);
  write_json(json_path, j);
  return r.exit_code();
}

} // namespace

int main(int argc, char **argv)
{
  CLI::App app{"exact checks for sh Lie-Rinehart data and their Maurer-Cartan algebras"};
  app.require_subcommand(1);
  std::string path, json_path, kind = "auto", window;
  int W = 0;

  auto *check = app.add_subcommand("check", "verify the identities of an instance");
  auto *roundtrip = app.add_subcommand("roundtrip", "build, extract and rebuild");
  auto *cohomology = app.add_subcommand("cohomology", "Betti numbers of the Maurer-Cartan algebra");
  for (auto *c : {check, roundtrip, cohomology}) {
    c->add_option("instance", path, "instance file, or catalog:<name>")->required();
    c->add_option("--W", W, "word-length bound (default: the instance policy, else 4)")
        ->check(CLI::Range(2, 12));
    c->add_option("--json", json_path, "also write the report as JSON ('-' for stdout only)");
  }
  check->add_option("--kind", kind, "auto|lr|shlr|quasi|mdca");
  cohomology->add_option("--window", window, "upper degree range a..b");

  auto *catalog = app.add_subcommand("catalog", "built-in instances");
  catalog->require_subcommand(1);
  auto *list = catalog->add_subcommand("list", "names of the built-in instances");
  std::string name, out_path, cert_path;
  auto *emit_cmd = catalog->add_subcommand("emit", "print an instance file");
  emit_cmd->add_option("name", name)->required();
  emit_cmd->add_option("--out", out_path, "write to a file instead of stdout");
  emit_cmd->add_option("--certificate", cert_path,
                       "quasi_sample only: also write the search certificate here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (list->parsed()) {
      for (const auto &n : catalog_names())
        std::cout << n << "\n";
      return 0;
    }
    if (emit_cmd->parsed()) {
      auto write = [](const std::string &file, const std::string &text) {
        std::ofstream out(file);
        if (!out)
          throw InputError(file + ": cannot write");
        out << text;
      };
      std::string text;
      if (!cert_path.empty()) {
        if (name != "quasi_sample")
          throw InputError("--certificate: only quasi_sample carries a search certificate");
        auto entry = quasi_catalog_entry();
        text = dump_instance(entry.instance);
        write(cert_path, dump_instance(entry.certificate));
      } else {
        text = dump_instance(catalog_json(name));
      }
      if (out_path.empty())
        std::cout << text;
      else
        write(out_path, text);
      return 0;
    }
    const Instance inst = load_instance(path);
    const int w = W > 0 ? W : inst.policy.W;
    if (check->parsed())
      return emit(cmd_check(inst, parse_kind(kind), w), json_path);
    if (roundtrip->parsed())
      return emit(cmd_roundtrip(inst, w), json_path);
    if (cohomology->parsed()) {
      int lo = 0, hi = w;
      if (!window.empty())
        std::tie(lo, hi) = parse_window(window);
      else if (inst.policy.windowed)
        std::tie(lo, hi) = std::pair{inst.policy.dmin, inst.policy.dmax};
      return emit(cmd_cohomology(inst, w, lo, hi), json_path);
    }
  } catch (const InputError &e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
