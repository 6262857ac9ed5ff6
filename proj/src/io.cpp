#include "ultraposet/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "ultraposet/caps.hpp"
#include "ultraposet/error.hpp"

namespace ultraposet {

namespace {

struct Token {
  std::string text;
  int line = 0;  // 1-based
  int col = 0;   // 1-based
};

/// One significant (non-blank, non-comment) line, already tokenized.
struct Line {
  std::vector<Token> tokens;
  int number = 0;
};

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> lines;
  int lineNo = 1;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view raw = text.substr(pos, eol == std::string_view::npos
                                                ? std::string_view::npos
                                                : eol - pos);
    Line line;
    line.number = lineNo;
    std::size_t i = 0;
    while (i < raw.size()) {
      if (is_space(raw[i])) {
        ++i;
        continue;
      }
      if (raw[i] == '#') break;  // comment to end of line
      std::size_t start = i;
      while (i < raw.size() && !is_space(raw[i]) && raw[i] != '#') ++i;
      line.tokens.push_back(
          {std::string(raw.substr(start, i - start)), lineNo, int(start) + 1});
    }
    if (!line.tokens.empty()) lines.push_back(std::move(line));
    if (eol == std::string_view::npos) break;
    pos = eol + 1;
    ++lineNo;
  }
  return lines;
}

const char* const kReserved[] = {"structure", "elements", "order",
                                 "rel",       "op",       "<=",
                                 "->"};

bool is_reserved(std::string_view t) {
  return std::find(std::begin(kReserved), std::end(kReserved), t) !=
         std::end(kReserved);
}

/// True when the token can appear in a file and be read back unchanged.
bool token_safe(std::string_view t) {
  if (t.empty() || is_reserved(t)) return false;
  for (char c : t)
    if (is_space(c) || c == '\n' || c == '#' ||
        std::iscntrl(static_cast<unsigned char>(c)))
      return false;
  return true;
}

struct Parser {
  std::string source;

  [[noreturn]] void err(int line, int col, const std::string& what) const {
    fail(ErrorKind::ParseError, source + ":" + std::to_string(line) + ":" +
                                    std::to_string(col) + ": " + what);
  }
  [[noreturn]] void err(const Token& t, const std::string& what) const {
    err(t.line, t.col, what);
  }
};

int parse_arity(const Parser& ps, const Token& t) {
  int value = 0;
  auto [end, ec] =
      std::from_chars(t.text.data(), t.text.data() + t.text.size(), value);
  if (ec != std::errc{} || end != t.text.data() + t.text.size())
    ps.err(t, "expected an arity, got '" + t.text + "'");
  if (value < 1 || value > 9)
    ps.err(t, "arity must be between 1 and 9, got " + t.text);
  return value;
}

std::string tuple_of_labels(const std::vector<std::string>& labels,
                            const std::vector<int>& ids) {
  std::string out = "(";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out += ", ";
    out += labels[ids[i]];
  }
  return out + ")";
}

/// Decodes a flat table index into argument ids, leftmost most significant.
std::vector<int> decode_index(long long idx, int carrier, int arity) {
  std::vector<int> args(std::size_t(arity), 0);
  for (int j = arity - 1; j >= 0; --j) {
    args[j] = int(idx % carrier);
    idx /= carrier;
  }
  return args;
}

struct OpBlock {
  Token header;      // the `op` keyword token (for end-of-block errors)
  std::string name;
  int arity = 1;
  std::vector<int> table;   // -1 = row not seen yet
  std::vector<int> rowLine; // line of the row that set each entry
};

}  // namespace

StructureFile parse_structure(std::string_view text,
                              std::string_view sourceName) {
  Parser ps{std::string(sourceName)};
  std::vector<Line> lines = tokenize(text);
  std::size_t at = 0;

  auto need_line = [&](const char* what) -> const Line& {
    if (at >= lines.size())
      ps.err(lines.empty() ? 1 : lines.back().number + 1, 1,
             std::string("unexpected end of file, expected ") + what);
    return lines[at];
  };

  // structure <name>
  {
    const Line& l = need_line("'structure <name>'");
    if (l.tokens[0].text != "structure")
      ps.err(l.tokens[0], "expected 'structure <name>', got '" +
                              l.tokens[0].text + "'");
    if (l.tokens.size() != 2)
      ps.err(l.tokens[0], "'structure' takes exactly one name");
    if (!token_safe(l.tokens[1].text))
      ps.err(l.tokens[1], "'" + l.tokens[1].text +
                              "' cannot be used as a structure name");
    ++at;
  }
  StructureFile out;
  out.name = lines[0].tokens[1].text;

  // elements <label> ...
  std::vector<std::string> labels;
  std::map<std::string, int> labelId;
  {
    const Line& l = need_line("'elements <label> ...'");
    if (l.tokens[0].text != "elements")
      ps.err(l.tokens[0],
             "expected 'elements <label> ...', got '" + l.tokens[0].text + "'");
    if (l.tokens.size() < 2)
      ps.err(l.tokens[0], "'elements' needs at least one label");
    for (std::size_t i = 1; i < l.tokens.size(); ++i) {
      const Token& t = l.tokens[i];
      if (!token_safe(t.text))
        ps.err(t, "'" + t.text + "' cannot be used as an element label");
      if (!labelId.emplace(t.text, int(labels.size())).second)
        fail(ErrorKind::ValidationError,
             ps.source + ":" + std::to_string(t.line) + ":" +
                 std::to_string(t.col) + ": duplicate element label '" +
                 t.text + "'");
      labels.push_back(t.text);
    }
    ++at;
  }
  const int n = int(labels.size());

  auto element = [&](const Token& t) -> int {
    auto it = labelId.find(t.text);
    if (it == labelId.end())
      ps.err(t, "unknown element label '" + t.text + "'");
    return it->second;
  };

  // Blocks.
  bool sawOrder = false;
  Token orderHeader;
  std::vector<std::pair<int, int>> orderPairs;
  std::map<std::string, Relation> relations;
  std::vector<OpBlock> ops;
  enum class Block { None, Order, Rel, Op };
  Block current = Block::None;
  Relation* currentRel = nullptr;
  OpBlock* currentOp = nullptr;

  auto block_names_unique = [&](const Token& nameTok) {
    if (relations.count(nameTok.text) ||
        std::any_of(ops.begin(), ops.end(),
                    [&](const OpBlock& o) { return o.name == nameTok.text; }))
      ps.err(nameTok, "duplicate block name '" + nameTok.text + "'");
  };

  for (; at < lines.size(); ++at) {
    const Line& l = lines[at];
    const Token& head = l.tokens[0];
    if (head.text == "structure" || head.text == "elements")
      ps.err(head, "'" + head.text + "' may appear only once, at the top");
    if (head.text == "order") {
      if (l.tokens.size() != 1) ps.err(l.tokens[1], "'order' takes no arguments");
      if (sawOrder) ps.err(head, "duplicate order block");
      if (!relations.empty())
        ps.err(head, "order and rel blocks cannot be mixed in one file");
      sawOrder = true;
      orderHeader = head;
      current = Block::Order;
      continue;
    }
    if (head.text == "rel") {
      if (l.tokens.size() != 3)
        ps.err(head, "expected 'rel <name> <arity>'");
      if (sawOrder)
        ps.err(head, "order and rel blocks cannot be mixed in one file");
      if (!token_safe(l.tokens[1].text))
        ps.err(l.tokens[1],
               "'" + l.tokens[1].text + "' cannot be used as a relation name");
      block_names_unique(l.tokens[1]);
      Relation r;
      r.arity = parse_arity(ps, l.tokens[2]);
      currentRel = &relations.emplace(l.tokens[1].text, std::move(r))
                        .first->second;
      current = Block::Rel;
      continue;
    }
    if (head.text == "op") {
      if (l.tokens.size() != 3) ps.err(head, "expected 'op <name> <arity>'");
      if (!relations.empty())
        ps.err(head, "op blocks require an order block, not rel blocks");
      if (!token_safe(l.tokens[1].text))
        ps.err(l.tokens[1],
               "'" + l.tokens[1].text + "' cannot be used as an operation name");
      block_names_unique(l.tokens[1]);
      OpBlock b;
      b.header = head;
      b.name = l.tokens[1].text;
      b.arity = parse_arity(ps, l.tokens[2]);
      long long entries = OperationTable::entry_count(n, b.arity);
      if (entries < 0 || entries > Caps::current().tableEntries)
        ps.err(head, "op " + b.name + " would need " +
                         (entries < 0 ? std::string("too many")
                                      : std::to_string(entries)) +
                         " rows, over the table cap");
      b.table.assign(std::size_t(entries), -1);
      b.rowLine.assign(std::size_t(entries), 0);
      ops.push_back(std::move(b));
      currentOp = &ops.back();
      current = Block::Op;
      continue;
    }

    // A row of the open block.
    switch (current) {
      case Block::None:
        ps.err(head, "expected a block header (order, rel, or op), got '" +
                         head.text + "'");
      case Block::Order: {
        if (l.tokens.size() != 3 || l.tokens[1].text != "<=")
          ps.err(head, "expected '<a> <= <b>'");
        orderPairs.emplace_back(element(l.tokens[0]), element(l.tokens[2]));
        break;
      }
      case Block::Rel: {
        if (int(l.tokens.size()) != currentRel->arity)
          ps.err(head, "expected " + std::to_string(currentRel->arity) +
                           " labels in this tuple, got " +
                           std::to_string(l.tokens.size()));
        std::vector<int> tuple;
        tuple.reserve(l.tokens.size());
        for (const Token& t : l.tokens) tuple.push_back(element(t));
        currentRel->tuples.insert(std::move(tuple));
        break;
      }
      case Block::Op: {
        const int arity = currentOp->arity;
        if (int(l.tokens.size()) != arity + 2 ||
            l.tokens[std::size_t(arity)].text != "->")
          ps.err(head, "expected '<a1> ... <a" + std::to_string(arity) +
                           "> -> <b>'");
        long long idx = 0;
        std::vector<int> args;
        for (int j = 0; j < arity; ++j) {
          args.push_back(element(l.tokens[std::size_t(j)]));
          idx = idx * n + args.back();
        }
        int value = element(l.tokens[std::size_t(arity) + 1]);
        if (currentOp->table[std::size_t(idx)] != -1)
          ps.err(head, "duplicate row for " + tuple_of_labels(labels, args) +
                           " in op " + currentOp->name + " (first at line " +
                           std::to_string(currentOp->rowLine[std::size_t(idx)]) +
                           ")");
        currentOp->table[std::size_t(idx)] = value;
        currentOp->rowLine[std::size_t(idx)] = head.line;
        break;
      }
    }
  }

  // Totality of every op block; the error names the first absent tuple.
  for (const OpBlock& b : ops) {
    auto hole = std::find(b.table.begin(), b.table.end(), -1);
    if (hole != b.table.end()) {
      long long idx = hole - b.table.begin();
      ps.err(b.header, "op " + b.name + " is missing the row for " +
                           tuple_of_labels(labels, decode_index(idx, n, b.arity)));
    }
  }

  if (!sawOrder && relations.empty())
    ps.err(lines.back().number + 1, 1,
           "file declares neither an order block nor rel blocks");

  if (sawOrder) {
    out.isRelational = false;
    try {
      out.algebra.poset = Poset::validate(labels, orderPairs);
    } catch (const Error& e) {
      fail(ErrorKind::ValidationError, ps.source + ": " + e.what());
    }
    for (OpBlock& b : ops)
      out.algebra.ops.emplace(b.name,
                              OperationTable::make(b.arity, n, std::move(b.table)));
  } else {
    out.isRelational = true;
    try {
      out.relational = RelationalStructure::validate(labels, relations);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::ValidationError) throw;
      fail(ErrorKind::ValidationError, ps.source + ": " + e.what());
    }
  }
  return out;
}

StructureFile load_structure(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::IoError, "cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) fail(ErrorKind::IoError, "read failure on '" + path + "'");
  return parse_structure(buf.str(), path);
}

namespace {

void require_safe(const std::string& token, const char* what) {
  if (!token_safe(token))
    fail(ErrorKind::ValidationError, std::string(what) + " '" + token +
                                         "' cannot be written to a structure file");
}

}  // namespace

std::string render_structure(const StructureFile& f) {
  require_safe(f.name, "structure name");
  const std::vector<std::string>& labels =
      f.isRelational ? f.relational.labels : f.algebra.poset.labels();
  if (labels.empty())
    fail(ErrorKind::ValidationError, "cannot render a structure with no elements");
  for (const std::string& l : labels) require_safe(l, "element label");

  std::string out = "structure " + f.name + "\nelements";
  for (const std::string& l : labels) out += " " + l;
  out += "\n";

  if (f.isRelational) {
    for (const auto& [name, r] : f.relational.relations) {
      require_safe(name, "relation name");
      out += "rel " + name + " " + std::to_string(r.arity) + "\n";
      for (const std::vector<int>& tuple : r.tuples) {
        out += " ";
        for (int x : tuple) out += " " + labels[std::size_t(x)];
        out += "\n";
      }
    }
  } else {
    out += "order\n";
    for (auto [a, b] : f.algebra.poset.cover_pairs())
      out += "  " + labels[std::size_t(a)] + " <= " + labels[std::size_t(b)] +
             "\n";
    const int n = int(labels.size());
    for (const auto& [name, t] : f.algebra.ops) {
      require_safe(name, "operation name");
      out += "op " + name + " " + std::to_string(t.arity) + "\n";
      for (long long idx = 0; idx < (long long)t.table.size(); ++idx) {
        out += " ";
        for (int a : decode_index(idx, n, t.arity))
          out += " " + labels[std::size_t(a)];
        out += " -> " + labels[std::size_t(t.table[std::size_t(idx)])] + "\n";
      }
    }
  }
  return out;
}

void save_structure(const StructureFile& f, const std::string& path) {
  std::string text = render_structure(f);
  std::ofstream outf(path, std::ios::binary | std::ios::trunc);
  if (!outf) fail(ErrorKind::IoError, "cannot write '" + path + "'");
  outf << text;
  outf.flush();
  if (!outf) fail(ErrorKind::IoError, "write failure on '" + path + "'");
}

StructureFile as_structure_file(std::string name, Poset p) {
  StructureFile f;
  f.name = std::move(name);
  f.algebra.poset = std::move(p);
  return f;
}

StructureFile as_structure_file(std::string name, Algebra a) {
  StructureFile f;
  f.name = std::move(name);
  f.algebra = std::move(a);
  return f;
}

StructureFile as_structure_file(std::string name, RelationalStructure s) {
  StructureFile f;
  f.name = std::move(name);
  f.isRelational = true;
  f.relational = std::move(s);
  return f;
}

}  // namespace ultraposet
