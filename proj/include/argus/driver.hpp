#pragma once

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "argus/bridge.hpp"
#include "argus/render.hpp"

namespace argus {

struct CliConfig {
  std::vector<std::string> inputs;
  std::string format = "text";  // text | json
  std::uint64_t stateBound = kDefaultStateBound;
  std::string color = "auto";  // auto | never
  std::string out;             // render target; empty = stdout
};

struct LoadedInputs {
  std::vector<RawElement> raws;
  std::vector<GclModule> gcls;
  std::vector<Diagnostic> diags;
};

inline bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

inline LoadedInputs load_inputs(const std::vector<std::string>& paths) {
  LoadedInputs out;
  std::set<std::string> obligationGids;
  for (const auto& path : paths) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
      out.diags.push_back(make_error("E000", SourceSpan{path, 1, 1, 1}, "cannot read file"));
      continue;
    }
    std::stringstream ss;
    ss << in.rdbuf();
    std::string text = ss.str();
    if (ends_with(path, ".ial")) {
      auto [raws, diags] = parse_ial(text, path);
      out.raws.insert(out.raws.end(), raws.begin(), raws.end());
      out.diags.insert(out.diags.end(), diags.begin(), diags.end());
    } else if (ends_with(path, ".gcl")) {
      auto [mod, diags] = parse_gcl(text, path);
      out.diags.insert(out.diags.end(), diags.begin(), diags.end());
      for (const auto& ob : mod.obligations)
        if (!obligationGids.insert(ob.gid).second)
          out.diags.push_back(make_error("E103", ob.span, "duplicate gid '" + ob.gid + "'"));
      out.gcls.push_back(std::move(mod));
    } else {
      out.diags.push_back(
          make_error("E000", SourceSpan{path, 1, 1, 1}, "unrecognized input extension"));
    }
  }
  return out;
}

struct CheckedInputs {
  LoadedInputs loaded;
  AssuranceModel model;
  std::vector<Diagnostic> diags;  // everything, cascaded, sorted
};

inline CheckedInputs run_check_pipeline(const std::vector<std::string>& paths) {
  CheckedInputs c;
  c.loaded = load_inputs(paths);
  auto index = GclIndex::from(c.loaded.gcls);
  auto [model, resolveDiags] = resolve(c.loaded.raws, index);
  c.model = std::move(model);
  auto constraintDiags = check_constraints(c.model);
  std::vector<Diagnostic> all = c.loaded.diags;
  all.insert(all.end(), resolveDiags.begin(), resolveDiags.end());
  all.insert(all.end(), constraintDiags.begin(), constraintDiags.end());
  c.diags = cascade(c.model, all);
  return c;
}

inline void print_diagnostics(const std::vector<Diagnostic>& ds, std::ostream& err) {
  for (const auto& d : ds) err << format_diagnostic(d) << "\n";
}

// check: parse + resolve + constraints + cascade; diagnostics to stderr.
inline int cmd_check(const CliConfig& cfg, std::ostream& outs, std::ostream& errs) {
  (void)outs;
  auto c = run_check_pipeline(cfg.inputs);
  print_diagnostics(c.diags, errs);
  return has_errors(c.diags) ? 1 : 0;
}

// verify: check, then discharge every obligation declared in the loaded
// modules (a superset of the bound ones).
inline int cmd_verify(const CliConfig& cfg, std::ostream& outs, std::ostream& errs) {
  auto c = run_check_pipeline(cfg.inputs);
  if (has_errors(c.diags)) {
    print_diagnostics(c.diags, errs);
    return 1;
  }
  print_diagnostics(c.diags, errs);  // warnings, if any
  std::set<std::string> gids;
  for (const auto& m : c.loaded.gcls)
    for (const auto& ob : m.obligations) gids.insert(ob.gid);
  auto rep = run_obligation_set(gids, c.loaded.gcls, cfg.stateBound);
  if (cfg.format == "json")
    outs << report_json(rep).dump(2) << "\n";
  else
    outs << report_text(rep);
  return (rep.fail == 0 && rep.error == 0) ? 0 : 2;
}

// status: verify, then fold verdicts into claim support status.
inline int cmd_status(const CliConfig& cfg, std::ostream& outs, std::ostream& errs) {
  auto c = run_check_pipeline(cfg.inputs);
  if (has_errors(c.diags)) {
    print_diagnostics(c.diags, errs);
    return 1;
  }
  print_diagnostics(c.diags, errs);
  auto [bindings, bindDiags] = argus::bind(c.model, c.loaded.gcls);
  if (has_errors(bindDiags)) {
    print_diagnostics(bindDiags, errs);
    return 1;
  }
  auto rep = run_all(bindings, c.loaded.gcls, cfg.stateBound);
  auto verdicts = attach_verdicts(bindings, rep);
  std::map<std::string, ClaimStatus> status;
  try {
    status = claim_status(c.model, verdicts);
  } catch (const CyclicSupport& e) {
    errs << "error: " << e.what() << "\n";
    return 1;
  }
  bool bad = false;
  nlohmann::json jclaims = nlohmann::json::array();
  for (const auto& e : c.model.elements()) {
    if (e.kind != ElemKind::Claim) continue;
    auto st = status.at(e.gid);
    if (cfg.format == "json")
      jclaims.push_back({{"gid", e.gid}, {"status", claim_status_name(st)}});
    else
      outs << e.gid << "  " << claim_status_name(st) << "\n";
    if (e.declaration != AssertionDeclaration::NeedsSupport &&
        (st == ClaimStatus::Unsupported || st == ClaimStatus::Defeated))
      bad = true;
  }
  if (cfg.format == "json") outs << nlohmann::json{{"claims", jclaims}}.dump(2) << "\n";
  return bad ? 1 : 0;
}

// render: DOT (or a JSON mirror of the graph) to --out or stdout.
inline int cmd_render(const CliConfig& cfg, std::ostream& outs, std::ostream& errs) {
  auto c = run_check_pipeline(cfg.inputs);
  if (has_errors(c.diags)) {
    print_diagnostics(c.diags, errs);
    return 1;
  }
  print_diagnostics(c.diags, errs);
  std::string payload = cfg.format == "json" ? render_json(c.model).dump(2) + "\n"
                                             : render_dot(c.model);
  if (cfg.out.empty()) {
    outs << payload;
    return 0;
  }
  std::ofstream f(cfg.out, std::ios::binary);
  if (!f) {
    errs << "error: cannot write " << cfg.out << "\n";
    return 1;
  }
  f << payload;
  return 0;
}

}  // namespace argus
