#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <CLI11.hpp>

#include "foid/kernel.hpp"
#include "foid/parser.hpp"
#include "foid/stable.hpp"
#include "foid/validator.hpp"
#include "foid/wf.hpp"

namespace {

using namespace foid;

struct Output {
  bool kv = false;
  bool color = false;

  std::string good(const std::string& s) const {
    return color ? "\033[32m" + s + "\033[0m" : s;
  }
  std::string bad(const std::string& s) const {
    return color ? "\033[31m" + s + "\033[0m" : s;
  }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FoidError("FileError", "cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void report_error(const std::string& file, const FoidError& e) {
  std::cerr << file << ":" << e.span().line << ":" << e.span().column
            << ": error[" << e.code() << "]: " << e.what() << "\n";
}

std::string tuple_text(const std::vector<int>& t) {
  if (t.empty()) return "()";
  if (t.size() == 1) return std::to_string(t[0]);
  std::string out = "(";
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(t[i]);
  }
  return out + ")";
}

std::string relation_text(const std::set<std::vector<int>>& rel) {
  std::string out = "{";
  bool first = true;
  for (const auto& t : rel) {
    if (!first) out += ",";
    first = false;
    out += tuple_text(t);
  }
  return out + "}";
}

std::string structure_text(const Structure& s) {
  Document doc;
  doc.items.push_back(StructItem{"counterexample", s});
  return print_document(doc);
}

// ---------------------------------------------------------------------------
// check / lint
// ---------------------------------------------------------------------------

int cmd_check(const std::vector<std::string>& files, const Output& out,
              bool lint_only) {
  int total = 0, failed = 0;
  for (const std::string& file : files) {
    Document doc;
    try {
      doc = parse_document(read_file(file));
    } catch (const FoidError& e) {
      report_error(file, e);
      return 2;
    }
    for (const ProofItem* pi : doc.proofs()) {
      ++total;
      const Sequent* goal = doc.find_sequent(pi->of);
      std::string status = "ok";
      std::string detail;
      std::vector<LintWarning> warnings;
      try {
        Proof p = elaborate(*goal, pi->root);
        if (auto err = check(p, *goal)) {
          status = "fail";
          detail = "node " + std::to_string(err->node) + " (" + err->rule +
                   "): [" + err->reason + "] " + err->message;
        } else {
          warnings = lint(p);
        }
      } catch (const FoidError& e) {
        status = "fail";
        detail = std::string("[") + e.code() + "] " + e.what();
      }
      if (status == "fail") ++failed;
      if (out.kv) {
        std::cout << "proof=" << pi->of << "\n";
        std::cout << "status=" << status << "\n";
        if (!detail.empty()) std::cout << "detail=" << detail << "\n";
        for (const auto& w : warnings)
          std::cout << "warning=" << w.code << "\n";
        std::cout << "\n";
      } else {
        std::cout << "proof of " << pi->of << ": "
                  << (status == "ok" ? out.good("ok") : out.bad("FAILED"))
                  << "\n";
        if (!detail.empty()) std::cout << "  " << detail << "\n";
        for (const auto& w : warnings)
          std::cout << "  warning [" << w.code << "] node " << w.node << ": "
                    << w.message << "\n";
      }
    }
  }
  if (out.kv) {
    std::cout << "proofs=" << total << "\n";
    std::cout << "failed=" << failed << "\n";
  } else if (failed == 0) {
    std::cout << (total == 0
                      ? "0 proofs"
                      : "ok (" + std::to_string(total) +
                            (total == 1 ? " proof)" : " proofs)"))
              << "\n";
  } else {
    std::cout << out.bad("FAILED") << " (" << failed << " of " << total
              << (total == 1 ? " proof)" : " proofs)") << "\n";
  }
  // lint mode only reports; failures still count because warnings are
  // meaningless for an unchecked proof
  (void)lint_only;
  return failed == 0 ? 0 : 1;
}

// ---------------------------------------------------------------------------
// model / stable
// ---------------------------------------------------------------------------

int print_wf_model(const Definition& def, const Structure& ctx,
                   const Output& out, bool verbose) {
  WfResult r = well_founded_model(def, ctx);
  const MergedDef m = merge_definition(def);
  if (out.kv) {
    for (const auto& a : domain_atoms(m, r.model.lower.dom)) {
      std::cout << "atom=" << to_string(a) << "\n";
      std::cout << "value=" << to_string(r.model.atom(a.pred, a.tuple))
                << "\n\n";
    }
    std::cout << "total=" << (is_total(r.model) ? "true" : "false") << "\n";
    if (verbose) std::cout << "steps=" << r.steps.size() << "\n";
    return 0;
  }
  for (const auto& p : m.preds) {
    std::cout << p << ":";
    for (const auto& t : all_tuples(r.model.lower.dom, m.arities.at(p)))
      std::cout << " " << tuple_text(t) << "->"
                << to_string(r.model.atom(p, t));
    std::cout << "\n";
  }
  std::cout << (is_total(r.model) ? "total" : "non-total") << "\n";
  if (verbose) {
    int i = 0;
    for (const auto& step : r.steps) {
      std::cout << "step " << ++i << ": "
                << (step.to_true ? "true" : "false") << " {";
      for (std::size_t k = 0; k < step.atoms.size(); ++k)
        std::cout << (k ? ", " : "") << to_string(step.atoms[k]);
      std::cout << "}\n";
    }
  }
  return 0;
}

int print_stable_models(const Definition& def, const Structure& ctx,
                        std::size_t cap, const Output& out) {
  auto models = stable_models(def, ctx, cap);
  const auto order = def.defined_order();
  if (out.kv) {
    std::cout << "models=" << models.size() << "\n\n";
    for (std::size_t i = 0; i < models.size(); ++i) {
      std::cout << "model=" << i + 1 << "\n";
      for (const auto& p : order)
        std::cout << p << "=" << relation_text(models[i].rels.at(p)) << "\n";
      std::cout << "\n";
    }
    return 0;
  }
  std::cout << models.size()
            << (models.size() == 1 ? " stable model" : " stable models")
            << "\n";
  for (std::size_t i = 0; i < models.size(); ++i) {
    std::cout << "model " << i + 1 << ":";
    for (const auto& p : order)
      std::cout << " " << p << "=" << relation_text(models[i].rels.at(p));
    std::cout << "\n";
  }
  return 0;
}

int cmd_model(const std::string& file, const std::string& def_name,
              const std::string& struct_name, const std::string& semantics,
              std::size_t cap, const Output& out, bool verbose) {
  Document doc = parse_document(read_file(file));
  const Definition* def = doc.find_def(def_name);
  if (!def) throw FoidError("UnknownSymbol", "no def named '" + def_name + "'");
  const Structure* ctx = doc.find_structure(struct_name);
  if (!ctx)
    throw FoidError("UnknownSymbol",
                    "no structure named '" + struct_name + "'");
  if (semantics == "wf") return print_wf_model(*def, *ctx, out, verbose);
  return print_stable_models(*def, *ctx, cap, out);
}

// ---------------------------------------------------------------------------
// validate
// ---------------------------------------------------------------------------

int cmd_validate(const std::string& file, const std::string& seq_name,
                 const ValidatorOptions& opts, const Output& out) {
  Document doc = parse_document(read_file(file));
  const Sequent* seq = doc.find_sequent(seq_name);
  if (!seq)
    throw FoidError("UnknownSymbol", "no sequent named '" + seq_name + "'");
  Verdict v = validate(*seq, opts);
  auto sizes = [](const std::vector<int>& ns) {
    std::string s;
    for (int n : ns) s += (s.empty() ? "" : " ") + std::to_string(n);
    return s.empty() ? "none" : s;
  };
  if (out.kv) {
    std::cout << "semantics=" << to_string(v.semantics) << "\n";
    std::cout << "max_n=" << opts.max_n << "\n";
    std::cout << "structures=" << v.structures_tested << "\n";
    std::cout << "sizes_tested=" << sizes(v.sizes_tested) << "\n";
    std::cout << "sizes_skipped=" << sizes(v.sizes_skipped) << "\n";
    std::cout << "counterexample=" << (v.ok() ? "none" : "found") << "\n";
    if (!v.ok()) std::cout << "size=" << v.counterexample_size << "\n";
  } else if (v.ok()) {
    std::cout << out.good("no counterexample") << " up to size " << opts.max_n
              << " under " << to_string(v.semantics) << " semantics ("
              << v.structures_tested << " structures; sizes tested: "
              << sizes(v.sizes_tested);
    if (!v.sizes_skipped.empty())
      std::cout << "; skipped over atom cap: " << sizes(v.sizes_skipped);
    std::cout << ")\n";
  } else {
    std::cout << out.bad("counterexample") << " at size "
              << v.counterexample_size << " under " << to_string(v.semantics)
              << " semantics:\n"
              << structure_text(*v.counterexample);
  }
  if (!v.ok()) return 1;
  return 0;
}

// ---------------------------------------------------------------------------
// export-fo
// ---------------------------------------------------------------------------

int cmd_export_fo(const std::string& file, const std::string& extra,
                  const Output& out) {
  std::string text = read_file(file);
  if (!extra.empty()) text += "\n" + read_file(extra);
  Document doc = parse_document(text);

  std::vector<std::pair<std::string, Formula>> emitted;
  std::set<std::string> used;
  for (const DocItem& item : doc.items) {
    if (const auto* d = std::get_if<DefItem>(&item)) {
      auto imps = material_implications(d->def);
      for (std::size_t i = 0; i < imps.size(); ++i)
        emitted.emplace_back(d->name + "_rule" + std::to_string(i),
                             std::move(imps[i]));
    } else if (const auto* m = std::get_if<SchemeItem>(&item)) {
      const Definition* d = doc.find_def(m->def_name);
      emitted.emplace_back(
          m->name, induction_instance(*d, m->principal, m->pi, m->hyps));
    }
  }

  Vocabulary voc;
  for (const auto& [name, f] : emitted) merge_vocabulary(voc, vocabulary(f));
  for (const auto& [n, a] : voc.preds) used.insert(n);
  for (const auto& [n, a] : voc.funcs) used.insert(n);

  Document fo;
  if (!voc.preds.empty()) {
    DeclItem preds;
    preds.is_pred = true;
    for (const auto& [n, a] : voc.preds) preds.sigs.emplace_back(n, a);
    fo.items.push_back(std::move(preds));
  }
  if (!voc.funcs.empty()) {
    DeclItem funcs;
    funcs.is_pred = false;
    for (const auto& [n, a] : voc.funcs) funcs.sigs.emplace_back(n, a);
    fo.items.push_back(std::move(funcs));
  }
  for (auto& [name, f] : emitted) {
    auto final_name = fresh_name(name, used);
    used.insert(final_name);
    fo.items.push_back(FormulaItem{final_name, std::move(f)});
  }
  (void)out;
  std::cout << print_document(fo);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"proof checker and finite-model toolkit for first-order "
               "logic with inductive definitions"};
  app.require_subcommand(1);
  app.fallthrough();  // accept global flags after the subcommand name

  std::string format = "text";
  app.add_option("--format", format, "output format")
      ->check(CLI::IsMember({"text", "kv"}));
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "more detail");

  std::vector<std::string> check_files;
  auto* c_check = app.add_subcommand("check", "check the proofs in files");
  c_check->add_option("files", check_files, "input files")->required();
  auto* c_lint =
      app.add_subcommand("lint", "check proofs and report advisory warnings");
  c_lint->add_option("files", check_files, "input files")->required();

  std::string file, def_name, struct_name, seq_name, extra_file;
  std::string semantics = "wf";
  int max_n = 3;
  std::size_t cap = 20;
  bool wide = false;

  auto* c_model = app.add_subcommand("model", "well-founded model of a "
                                              "definition over a structure");
  c_model->add_option("file", file)->required();
  c_model->add_option("def", def_name)->required();
  c_model->add_option("structure", struct_name)->required();
  c_model->add_option("--semantics", semantics)
      ->check(CLI::IsMember({"wf", "stable"}));
  c_model->add_option("--cap", cap, "max defined ground atoms");

  auto* c_stable = app.add_subcommand("stable", "all stable models of a "
                                                "definition over a structure");
  c_stable->add_option("file", file)->required();
  c_stable->add_option("def", def_name)->required();
  c_stable->add_option("structure", struct_name)->required();
  c_stable->add_option("--cap", cap, "max defined ground atoms");

  auto* c_validate = app.add_subcommand(
      "validate", "search small structures for a counterexample");
  c_validate->add_option("file", file)->required();
  c_validate->add_option("sequent", seq_name)->required();
  c_validate->add_option("--semantics", semantics)
      ->check(CLI::IsMember({"wf", "stable"}));
  c_validate->add_option("--max-n", max_n, "largest domain size");
  c_validate->add_option("--cap", cap, "max ground atoms per size");
  c_validate->add_flag("--wide-functions", wide,
                       "allow function arity >= 2");

  auto* c_export = app.add_subcommand(
      "export-fo", "emit material implications and requested "
                   "induction-scheme instances as first-order formulas");
  c_export->add_option("file", file)->required();
  c_export->add_option("schemes", extra_file,
                       "extra document with scheme requests");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  Output out;
  out.kv = (format == "kv");
  out.color = isatty(1) && std::getenv("FOID_NO_COLOR") == nullptr;

  try {
    if (c_check->parsed()) return cmd_check(check_files, out, false);
    if (c_lint->parsed()) return cmd_check(check_files, out, true);
    if (c_model->parsed())
      return cmd_model(file, def_name, struct_name, semantics, cap, out,
                       verbose);
    if (c_stable->parsed())
      return cmd_model(file, def_name, struct_name, "stable", cap, out,
                       verbose);
    if (c_validate->parsed()) {
      ValidatorOptions opts;
      opts.max_n = max_n;
      opts.atom_cap = cap;
      opts.allow_wide_functions = wide;
      opts.semantics = semantics == "wf" ? SemanticsKind::WellFounded
                                         : SemanticsKind::Stable;
      return cmd_validate(file, seq_name, opts, out);
    }
    if (c_export->parsed()) return cmd_export_fo(file, extra_file, out);
  } catch (const FoidError& e) {
    report_error(file.empty() ? "input" : file, e);
    return 2;
  }
  return 2;
}
