#include "ultraposet/cli.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ultraposet/caps.hpp"
#include "ultraposet/complex.hpp"
#include "ultraposet/error.hpp"
#include "ultraposet/fol.hpp"
#include "ultraposet/gen.hpp"
#include "ultraposet/io.hpp"
#include "ultraposet/order.hpp"
#include "ultraposet/product.hpp"

namespace ultraposet {

namespace {

const char* bstr(bool b) { return b ? "true" : "false"; }

std::string join_args(const std::vector<std::string>& args) {
  std::string out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ' ';
    out += args[i];
  }
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  if (s.empty()) return out;
  std::size_t pos = 0;
  while (true) {
    std::size_t nxt = s.find(sep, pos);
    out.push_back(s.substr(pos, nxt == std::string::npos ? std::string::npos
                                                         : nxt - pos));
    if (nxt == std::string::npos) break;
    pos = nxt + 1;
  }
  return out;
}

int parse_int(const std::string& t, const char* what) {
  int v = 0;
  auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc{} || end != t.data() + t.size())
    fail(ErrorKind::UsageError,
         std::string(what) + " must be an integer, got '" + t + "'");
  return v;
}

/// Whitespace-free set/list renderings for the machine lines. Witness lines
/// use the library's label_set/label_tuple (human spacing) instead.
std::string machine_set(const std::vector<std::string>& parts) {
  std::string out = "{";
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ",";
    out += parts[i];
  }
  return out + "}";
}

std::string machine_set(const Poset& p, const std::vector<int>& ids) {
  std::vector<std::string> parts;
  parts.reserve(ids.size());
  for (int x : ids) parts.push_back(p.label(x));
  return machine_set(parts);
}

std::string machine_ints(const std::vector<int>& xs) {
  std::vector<std::string> parts;
  parts.reserve(xs.size());
  for (int x : xs) parts.push_back(std::to_string(x));
  return machine_set(parts);
}

std::string seconds_str(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", s);
  return std::string(buf) + "s";
}

/// Output-name token for saved files, taken from the output path's stem.
std::string stem_name(const std::string& path) {
  std::string s = std::filesystem::path(path).stem().string();
  std::string out;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c)) && c != '#' &&
        !std::iscntrl(static_cast<unsigned char>(c)))
      out += c;
  static const char* const reserved[] = {"structure", "elements", "order",
                                         "rel",       "op",       "<=",
                                         "->"};
  if (out.empty() ||
      std::find(std::begin(reserved), std::end(reserved), out) !=
          std::end(reserved))
    out = "out";
  return out;
}

/// The input files of a family command, loaded and classified: either all
/// order-kind (an AlgebraFamily) or all relational-kind.
struct LoadedFamily {
  bool relational = false;
  AlgebraFamily alg;
  RelationalFamily rel;
  int count = 0;

  const IndexSet& index() const { return relational ? rel.index : alg.index; }
};

LoadedFamily load_family(const std::vector<std::string>& files) {
  std::vector<StructureFile> sfs;
  sfs.reserve(files.size());
  for (const std::string& f : files) sfs.push_back(load_structure(f));
  LoadedFamily out;
  out.count = int(sfs.size());
  out.relational = sfs[0].isRelational;
  for (const StructureFile& sf : sfs)
    if (sf.isRelational != out.relational)
      fail(ErrorKind::UsageError,
           "cannot mix order and relational files in one family");
  IndexSet ix = IndexSet::make(out.count);
  if (out.relational) {
    out.rel.index = std::move(ix);
    for (StructureFile& sf : sfs) out.rel.members.push_back(std::move(sf.relational));
    validate_family(out.rel);
  } else {
    out.alg.index = std::move(ix);
    for (StructureFile& sf : sfs) out.alg.members.push_back(std::move(sf.algebra));
    validate_family(out.alg);
  }
  return out;
}

FilterSpec parse_filter(const std::string& text, const IndexSet& ix) {
  std::vector<int> gen;
  for (const std::string& t : split(text, ','))
    gen.push_back(parse_int(t, "filter index"));
  return make_filter(ix, gen);
}

Signature family_signature(const LoadedFamily& fam) {
  if (fam.relational) {
    std::map<std::string, int> rels;
    for (const auto& [name, r] : fam.rel.members[0].relations)
      rels[name] = r.arity;
    return Signature::make(std::move(rels), {});
  }
  std::map<std::string, int> ops;
  for (const auto& [name, t] : fam.alg.members[0].ops) ops[name] = t.arity;
  return Signature::make({{"leq", 2}}, std::move(ops));
}

Assignment parse_assignment(const std::string& text,
                            const std::vector<std::string>& labels,
                            int factor) {
  Assignment a;
  for (const std::string& pair : split(text, ',')) {
    std::size_t eq = pair.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 >= pair.size())
      fail(ErrorKind::UsageError,
           "bad assignment '" + pair + "', expected name=label");
    std::string name = pair.substr(0, eq);
    std::string label = pair.substr(eq + 1);
    if (a.count(name))
      fail(ErrorKind::UsageError, "duplicate assignment for '" + name + "'");
    auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end())
      fail(ErrorKind::UnknownElement, "factor " + std::to_string(factor) +
                                          " has no element labeled '" + label +
                                          "'");
    a[name] = int(it - labels.begin());
  }
  return a;
}

void push(RunReport& rep, std::string line) {
  rep.lines.push_back(std::move(line));
}

// ---------------------------------------------------------------------------
// Command handlers. Each sets rep.exitCode; thrown Errors become exit 2.

void cmd_check(RunReport& rep, const std::string& file) {
  StructureFile sf = load_structure(file);
  bool failed = false;
  if (sf.isRelational) {
    const RelationalStructure& s = sf.relational;
    push(rep, "#? structure name=" + sf.name + " kind=relational elements=" +
                  std::to_string(s.size()));
    for (const auto& [name, r] : s.relations)
      push(rep, "#? rel name=" + name + " arity=" + std::to_string(r.arity) +
                    " tuples=" + std::to_string(r.tuples.size()));
    rep.exitCode = 0;
    return;
  }

  const Poset& p = sf.algebra.poset;
  push(rep, "#? structure name=" + sf.name +
                " kind=order elements=" + std::to_string(p.size()));
  std::string why;
  bool axioms = p.check_axioms(&why);
  push(rep, std::string("#? axioms verdict=") + (axioms ? "pass" : "fail"));
  if (!axioms) {
    push(rep, "  " + why);
    failed = true;
  }
  push(rep, std::string("#? lattice complete=") + bstr(is_complete_lattice(p)));

  const Caps caps = Caps::current();
  for (const auto& [name, t] : sf.algebra.ops) {
    MonotoneReport mono = is_monotone(p, t);
    std::string line = "#? op name=" + name +
                       " arity=" + std::to_string(t.arity) +
                       " monotone=" + bstr(mono.holds);
    std::vector<std::string> witnesses;
    if (!mono.holds) {
      failed = true;
      witnesses.push_back("  monotone witness: " + name +
                          label_tuple(p, mono.tupleLo) + " = " +
                          p.label(t.apply(mono.tupleLo)) + " but " + name +
                          label_tuple(p, mono.tupleHi) + " = " +
                          p.label(t.apply(mono.tupleHi)));
    }
    bool checkable = t.arity <= 3 && p.size() <= caps.additivity(t.arity);
    auto describe = [&](const char* tag, const AdditivityReport& r) {
      line += std::string(" ") + tag + "=" + bstr(r.holds);
      if (!r.holds && r.witness) {
        failed = true;
        const AdditivityWitness& w = *r.witness;
        std::string s = std::string("  ") + tag + " witness: subsets=(";
        for (std::size_t i = 0; i < w.subsets.size(); ++i) {
          if (i) s += ", ";
          s += label_set(p, w.subsets[i]);
        }
        s += ") sups=" + label_tuple(p, w.sups) + " " + name +
             "(sups)=" + p.label(w.fOfSups) + " imageSup=";
        s += w.imageSup.exists ? p.label(w.imageSup.value)
                               : "none (" + w.imageSup.reason + ")";
        witnesses.push_back(std::move(s));
      } else if (!r.holds) {
        failed = true;
      }
    };
    if (checkable) {
      describe("quasi", is_quasi_complete(p, t));
      describe("additive", is_completely_additive(p, t));
    } else {
      line += " quasi=skipped additive=skipped";
    }
    push(rep, std::move(line));
    for (std::string& w : witnesses) push(rep, std::move(w));
  }
  rep.exitCode = failed ? 1 : 0;
}

void cmd_product(RunReport& rep, const std::vector<std::string>& files,
                 const std::string& out) {
  LoadedFamily fam = load_family(files);
  int size = 0;
  if (fam.relational) {
    RelationalProductResult pr = direct_product(fam.rel);
    size = pr.product.size();
    save_structure(as_structure_file(stem_name(out), std::move(pr.product)), out);
  } else {
    ProductResult pr = direct_product(fam.alg);
    size = pr.product.poset.size();
    save_structure(as_structure_file(stem_name(out), std::move(pr.product)), out);
  }
  push(rep, std::string("#? product kind=") +
                (fam.relational ? "relational" : "order") +
                " members=" + std::to_string(fam.count) +
                " size=" + std::to_string(size));
  push(rep, "#? output file=" + out);
  rep.exitCode = 0;
}

void cmd_ultraproduct(RunReport& rep, const std::string& filter,
                      const std::vector<std::string>& files,
                      const std::string& out) {
  LoadedFamily fam = load_family(files);
  FilterSpec fs = parse_filter(filter, fam.index());
  int classes = 0;
  if (fam.relational) {
    RelationalReducedResult rr = reduced_product(fam.rel, fs);
    classes = int(rr.classes.size());
    save_structure(as_structure_file(stem_name(out), std::move(rr.quotient)), out);
  } else {
    ReducedResult rr = reduced_product(fam.alg, fs);
    classes = int(rr.classes.size());
    save_structure(as_structure_file(stem_name(out), std::move(rr.quotient)), out);
  }
  push(rep, std::string("#? ultraproduct kind=") +
                (fam.relational ? "relational" : "order") +
                " members=" + std::to_string(fam.count) +
                " filter=" + machine_ints(fs.generator) +
                " ultra=" + bstr(fs.isUltra) +
                " classes=" + std::to_string(classes));
  push(rep, "#? output file=" + out);
  rep.exitCode = 0;
}

void cmd_los(RunReport& rep, const std::string& formulaText,
             const std::vector<std::string>& assigns,
             const std::string& filter,
             const std::vector<std::string>& files) {
  LoadedFamily fam = load_family(files);
  FilterSpec fs = parse_filter(filter, fam.index());
  Signature sig = family_signature(fam);
  FormulaPtr phi = parse_formula(formulaText, sig);

  std::vector<Assignment> perIndex(std::size_t(fam.count), Assignment{});
  if (!assigns.empty()) {
    if (int(assigns.size()) != fam.count)
      fail(ErrorKind::UsageError,
           "--assign must be given once per input file (" +
               std::to_string(fam.count) + " files, got " +
               std::to_string(assigns.size()) + ")");
    for (int i = 0; i < fam.count; ++i) {
      const std::vector<std::string>& labels =
          fam.relational ? fam.rel.members[std::size_t(i)].labels
                         : fam.alg.members[std::size_t(i)].poset.labels();
      perIndex[std::size_t(i)] = parse_assignment(assigns[std::size_t(i)], labels, i);
    }
  }

  LosReport lr = fam.relational ? los_check(fam.rel, fs, phi, perIndex)
                                : los_check(fam.alg, fs, phi, perIndex);
  push(rep, "formula: " + print_formula(phi));
  push(rep, "#? los filter=" + machine_ints(fs.generator) +
                " ultra=" + bstr(fs.isUltra) +
                " J_true=" + machine_ints(lr.J_true) +
                " inFilter=" + bstr(lr.inFilter) +
                " product=" + bstr(lr.productSatisfies) +
                " agree=" + bstr(lr.agree));
  // For a proper non-ultra filter, disagreement is expected and informational.
  rep.exitCode = (fs.isUltra && !lr.agree) ? 1 : 0;
}

void cmd_complete(RunReport& rep, const std::string& file,
                  const std::string& out) {
  StructureFile sf = load_structure(file);
  if (sf.isRelational)
    fail(ErrorKind::UsageError, "complete expects an order file");
  if (!sf.algebra.ops.empty())
    push(rep, "note: operation blocks are not carried through the completion");
  const Poset& p = sf.algebra.poset;
  CompletionResult cr = dm_completion(p);

  // Cut labels are rendered by the library with ", " separators; strip the
  // spaces so they are file-safe tokens.
  std::vector<std::string> labels;
  std::set<std::string> seen;
  for (int i = 0; i < cr.lattice.size(); ++i) {
    std::string l;
    for (char c : cr.lattice.label(i))
      if (c != ' ') l += c;
    if (!seen.insert(l).second) {
      l += "_" + std::to_string(i);
      seen.insert(l);
    }
    labels.push_back(std::move(l));
  }
  std::vector<Bitset> rows;
  rows.reserve(std::size_t(cr.lattice.size()));
  for (int i = 0; i < cr.lattice.size(); ++i) rows.push_back(cr.lattice.up(i));
  Poset lat = Poset::from_closed(std::move(labels), std::move(rows));

  std::string emb = "embedding:";
  for (int x = 0; x < p.size(); ++x)
    emb += " " + p.label(x) + "->" + lat.label(cr.embedding[std::size_t(x)]);
  push(rep, std::move(emb));
  push(rep, "#? complete source=" + std::to_string(p.size()) +
                " size=" + std::to_string(lat.size()) +
                " complete_lattice=" + bstr(is_complete_lattice(lat)));
  save_structure(as_structure_file(stem_name(out), std::move(lat)), out);
  push(rep, "#? output file=" + out);
  rep.exitCode = 0;
}

void cmd_cm(RunReport& rep, const std::string& file, const std::string& out) {
  StructureFile sf = load_structure(file);
  if (!sf.isRelational)
    fail(ErrorKind::UsageError, "cm expects a relational file");
  BAO b = complex_algebra(sf.relational);
  Algebra a;
  a.poset = b.lattice;
  a.ops = b.operators;  // reserved names keep these from colliding
  a.ops.emplace("meet", b.meet);
  a.ops.emplace("join", b.join);
  a.ops.emplace("not", b.complement);
  push(rep, "#? cm atoms=" + std::to_string(b.atomCount) +
                " carrier=" + std::to_string(b.lattice.size()) +
                " operators=" + std::to_string(b.operators.size()));
  save_structure(as_structure_file(stem_name(out), std::move(a)), out);
  push(rep, "#? output file=" + out);
  rep.exitCode = 0;
}

void cmd_givant(RunReport& rep, const std::string& filter,
                const std::vector<std::string>& files) {
  LoadedFamily fam = load_family(files);
  if (!fam.relational)
    fail(ErrorKind::UsageError, "givant expects relational files");
  FilterSpec fs = parse_filter(filter, fam.index());
  if (!fs.isUltra)
    fail(ErrorKind::UsageError,
         "givant requires an ultrafilter; pass a single index");
  GivantReport g = givant_check(fam.rel, fs);
  push(rep, "#? givant members=" + std::to_string(fam.count) +
                " filter=" + machine_ints(fs.generator) +
                " atoms=" + std::to_string(g.lhs.atomCount) +
                " lhs=" + std::to_string(g.lhs.lattice.size()) +
                " rhs=" + std::to_string(g.rhs.lattice.size()) +
                " isIso=" + bstr(g.isIso));
  if (!g.isIso) {
    std::string m = "  canonical map:";
    for (std::size_t i = 0; i < g.canonicalMap.size(); ++i)
      m += " " + g.rhs.lattice.label(int(i)) + "->" +
           (g.canonicalMap[i] >= 0 ? g.lhs.lattice.label(g.canonicalMap[i])
                                   : std::string("?"));
    push(rep, std::move(m));
  }
  rep.exitCode = g.isIso ? 0 : 1;
}

void cmd_replay(RunReport& rep, const std::string& opName,
                const std::string& setText, const std::string& boundLabel,
                const std::string& file) {
  StructureFile sf = load_structure(file);
  if (sf.isRelational)
    fail(ErrorKind::UsageError, "replay expects an order file");
  const Poset& p = sf.algebra.poset;
  auto it = sf.algebra.ops.find(opName);
  if (it == sf.algebra.ops.end())
    fail(ErrorKind::UnknownSymbol, "file has no operation named '" + opName + "'");
  const OperationTable& f = it->second;
  if (f.arity != 1)
    fail(ErrorKind::UsageError, "replay requires a unary operation; '" +
                                    opName + "' has arity " +
                                    std::to_string(f.arity));
  std::vector<int> X;
  for (const std::string& l : split(setText, ',')) {
    int id = p.find_label(l);
    if (id < 0)
      fail(ErrorKind::UnknownElement, "no element labeled '" + l + "'");
    X.push_back(id);
  }
  std::sort(X.begin(), X.end());
  X.erase(std::unique(X.begin(), X.end()), X.end());
  int y = p.find_label(boundLabel);
  if (y < 0)
    fail(ErrorKind::UnknownElement, "no element labeled '" + boundLabel + "'");

  ProofReport r = replay_proof(p, f, X, y);
  push(rep, "#? replay op=" + opName + " set=" + machine_set(p, X) +
                " bound=" + p.label(y));
  auto supLabel = [&](const SupResult& s) {
    return s.exists ? p.label(s.value) : "none";
  };
  push(rep, "#? replay A=" + machine_set(p, r.A) +
                " Xsubset=" + bstr(r.XsubsetA) + " supA=" + supLabel(r.supA) +
                " eq1=" + bstr(r.eq1) + " sigma=" + bstr(r.sigmaHolds) +
                " imageSup=" + supLabel(r.imageSupA) + " eq3=" + bstr(r.eq3) +
                " phi=" + bstr(r.phiHolds) +
                " conclusion=" + bstr(r.conclusion) +
                " overall=" + bstr(r.overall));
  bool all = r.XsubsetA && r.eq1 && r.sigmaHolds && r.eq3 && r.phiHolds &&
             r.conclusion && r.overall;
  rep.exitCode = all ? 0 : 1;
}

void cmd_campaign(RunReport& rep, std::uint64_t seed, int trials,
                  const std::string& propsText) {
  CampaignConfig cfg;
  cfg.masterSeed = seed;
  cfg.trials = trials;
  if (propsText.empty()) {
    cfg.properties = {CampaignProperty::Theorem1, CampaignProperty::Lemma1,
                      CampaignProperty::Quasi, CampaignProperty::Los,
                      CampaignProperty::Givant};
  } else {
    for (const std::string& t : split(propsText, ',')) {
      auto prop = campaign_property_from_name(t);
      if (!prop)
        fail(ErrorKind::UsageError,
             "unknown property '" + t +
                 "' (valid: theorem1, lemma1, quasi, los, givant)");
      cfg.properties.push_back(*prop);
    }
  }
  CampaignReport cr = run_campaign(cfg);

  std::string propsEcho;
  for (std::size_t i = 0; i < cfg.properties.size(); ++i) {
    if (i) propsEcho += ",";
    propsEcho += to_string(cfg.properties[i]);
  }
  push(rep, "#? campaign seed=" + std::to_string(seed) +
                " trials=" + std::to_string(trials) + " props=" + propsEcho);
  bool anyFailure = false;
  for (const PropertyStats& ps : cr.perProperty) {
    push(rep, std::string("#? campaign property=") + to_string(ps.property) +
                  " trials=" + std::to_string(ps.trials) +
                  " passes=" + std::to_string(ps.passes) +
                  " failures=" + std::to_string(ps.failures.size()));
    for (const CampaignFailure& f : ps.failures) {
      anyFailure = true;
      push(rep, std::string("#? failure property=") + to_string(f.property) +
                    " trial=" + std::to_string(f.trial) +
                    " seed=" + std::to_string(f.seed) + " detail: " + f.detail);
    }
  }
  push(rep, "wall time: " + seconds_str(cr.wallTimeSeconds));
  rep.exitCode = anyFailure ? 1 : 0;
}

}  // namespace

RunReport dispatch(const std::vector<std::string>& args) {
  RunReport rep;
  rep.commandEcho = join_args(args);
  rep.lines.push_back(rep.commandEcho.empty() ? "#? command"
                                              : "#? command " + rep.commandEcho);

  CLI::App app{
      "workbench for finite order structures: products, ultraproducts over "
      "principal filters, completions, complex algebras, and property "
      "campaigns"};
  app.name("ultraposet");
  app.require_subcommand(1);

  // check
  auto* check = app.add_subcommand(
      "check", "validate a structure file and audit each operation");
  std::string checkFile;
  check->add_option("file", checkFile, "structure file")->required();
  check->callback([&] { cmd_check(rep, checkFile); });

  // product
  auto* product =
      app.add_subcommand("product", "direct product of the input files");
  std::vector<std::string> productFiles;
  std::string productOut;
  product->add_option("files", productFiles, "structure files")
      ->required()
      ->expected(-1);
  product->add_option("-o,--output", productOut, "output file")->required();
  product->callback([&] { cmd_product(rep, productFiles, productOut); });

  // ultraproduct
  auto* ultra = app.add_subcommand(
      "ultraproduct",
      "reduced product modulo the principal filter generated by J");
  std::vector<std::string> ultraFiles;
  std::string ultraOut, ultraFilter;
  ultra->add_option("--filter", ultraFilter,
                    "comma list of index-set positions generating the filter "
                    "(a single index gives an ultrafilter)")
      ->required();
  ultra->add_option("files", ultraFiles, "structure files")
      ->required()
      ->expected(-1);
  ultra->add_option("-o,--output", ultraOut, "output file")->required();
  ultra->callback(
      [&] { cmd_ultraproduct(rep, ultraFilter, ultraFiles, ultraOut); });

  // los
  auto* los = app.add_subcommand(
      "los", "compare pointwise truth on a filter set with truth in the "
             "reduced product");
  std::string losFormula, losFilter;
  std::vector<std::string> losAssigns, losFiles;
  los->add_option("--formula", losFormula, "first-order formula text")
      ->required();
  los->add_option("--assign", losAssigns,
                  "per-factor assignment name=label[,name=label...]; repeat "
                  "once per input file")
      ->type_size(1)
      ->allow_extra_args(false);
  los->add_option("--filter", losFilter, "filter generator (comma list)")
      ->required();
  los->add_option("files", losFiles, "structure files")->required()->expected(-1);
  los->callback(
      [&] { cmd_los(rep, losFormula, losAssigns, losFilter, losFiles); });

  // complete
  auto* complete = app.add_subcommand(
      "complete", "Dedekind-MacNeille completion of an order file");
  std::string completeFile, completeOut;
  complete->add_option("file", completeFile, "order file")->required();
  complete->add_option("-o,--output", completeOut, "output file")->required();
  complete->callback([&] { cmd_complete(rep, completeFile, completeOut); });

  // cm
  auto* cm = app.add_subcommand(
      "cm", "complex algebra of a relational file (powerset + existential "
            "image operators)");
  std::string cmFile, cmOut;
  cm->add_option("file", cmFile, "relational file")->required();
  cm->add_option("-o,--output", cmOut, "output file")->required();
  cm->callback([&] { cmd_cm(rep, cmFile, cmOut); });

  // givant
  auto* givant = app.add_subcommand(
      "givant", "canonical-isomorphism check between the complex algebra of "
                "an ultraproduct and the completed ultraproduct of complex "
                "algebras");
  std::string givantFilter;
  std::vector<std::string> givantFiles;
  givant->add_option("--filter", givantFilter, "ultrafilter generator (one index)")
      ->required();
  givant->add_option("files", givantFiles, "relational files")
      ->required()
      ->expected(-1);
  givant->callback([&] { cmd_givant(rep, givantFilter, givantFiles); });

  // replay
  auto* replay = app.add_subcommand(
      "replay", "step-by-step transcript of the unary preservation argument");
  std::string replayOp, replaySet, replayBound, replayFile;
  replay->add_option("--op", replayOp, "unary operation name")->required();
  replay->add_option("--set", replaySet,
                     "comma list of element labels (the subset X; empty for "
                     "the empty set)")
      ->required();
  replay->add_option("--bound", replayBound,
                     "element label bounding the image of X")
      ->required();
  replay->add_option("file", replayFile, "order file")->required();
  replay->callback(
      [&] { cmd_replay(rep, replayOp, replaySet, replayBound, replayFile); });

  // campaign
  auto* campaign = app.add_subcommand(
      "campaign", "seeded random property campaign over generated families");
  std::uint64_t campaignSeed = 0;
  int campaignTrials = 100;
  std::string campaignProps;
  campaign->add_option("--seed", campaignSeed, "master seed (default 0)");
  campaign->add_option("--trials", campaignTrials,
                       "trials per property (default 100)");
  campaign->add_option(
      "--props", campaignProps,
      "comma list from theorem1,lemma1,quasi,los,givant (default all)");
  campaign->callback(
      [&] { cmd_campaign(rep, campaignSeed, campaignTrials, campaignProps); });

  std::vector<const char*> cargv;
  cargv.reserve(args.size() + 1);
  cargv.push_back("ultraposet");
  for (const std::string& a : args) cargv.push_back(a.c_str());

  try {
    app.parse(int(cargv.size()), cargv.data());
  } catch (const CLI::CallForHelp&) {
    auto parsed = app.get_subcommands();
    std::string help = parsed.empty() ? app.help() : parsed.front()->help();
    std::istringstream in(help);
    for (std::string line; std::getline(in, line);)
      rep.lines.push_back(line);
    rep.exitCode = 0;
  } catch (const CLI::ParseError& e) {
    rep.lines.push_back(std::string("error: ") + e.what());
    rep.lines.push_back("#? error kind=UsageError");
    rep.exitCode = 2;
  } catch (const Error& e) {
    rep.lines.push_back(std::string("error: ") + e.what());
    rep.lines.push_back(std::string("#? error kind=") + to_string(e.kind()));
    rep.exitCode = 2;
  }
  rep.lines.push_back("#? exit " + std::to_string(rep.exitCode));
  return rep;
}

int run_cli(const std::vector<std::string>& args) {
  RunReport rep = dispatch(args);
  for (const std::string& line : rep.lines) std::cout << line << "\n";
  return rep.exitCode;
}

}  // namespace ultraposet
