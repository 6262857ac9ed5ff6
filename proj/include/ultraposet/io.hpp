#pragma once

#include <string>
#include <string_view>

#include "ultraposet/order.hpp"
#include "ultraposet/relational.hpp"

namespace ultraposet {

/// Parsed structure file. A file is either order-kind (one `order` block plus
/// any number of `op` blocks, loaded as an Algebra whose ops map may be
/// empty) or relational-kind (one or more `rel` blocks, loaded as a
/// RelationalStructure). The two kinds cannot be mixed in one file.
struct StructureFile {
  std::string name;
  bool isRelational = false;
  Algebra algebra;                 // meaningful when !isRelational
  RelationalStructure relational;  // meaningful when isRelational

  bool operator==(const StructureFile&) const = default;
};

/// Parses the line-oriented text format:
///
///   structure <name>
///   elements <label> <label> ...
///   order                # then one generating pair per line: <a> <= <b>
///   rel <name> <arity>   # then one tuple per line: <a1> ... <an>
///   op <name> <arity>    # then one row per line: <a1> ... <an> -> <b>
///
/// `#` starts a comment; blank lines are skipped; indentation is free.
/// Labels and names are whitespace-delimited tokens; the keywords
/// (structure, elements, order, rel, op) and the arrows (<=, ->) are
/// reserved and cannot be used as labels or names.
///
/// Throws ParseError for format violations (messages carry
/// "<source>:<line>:<column>:") and ValidationError when the parsed object
/// fails semantic validation (duplicate labels, order cycles, ...).
StructureFile parse_structure(std::string_view text,
                              std::string_view sourceName = "<memory>");

/// parse_structure over a file's contents. Throws IoError when the file
/// cannot be read.
StructureFile load_structure(const std::string& path);

/// Canonical rendering: the order block lists cover pairs sorted by id, op
/// rows appear in ascending flat-table order, and rel/op blocks are sorted
/// by name. parse(render(f)) == f, and render is a fixed point on its own
/// output, so files round-trip byte-identically once normalized.
/// Throws ValidationError when a label or name cannot be carried by the
/// format (empty, whitespace, '#', or a reserved token).
std::string render_structure(const StructureFile& f);

/// render_structure to a file. Throws IoError when the path is not writable.
void save_structure(const StructureFile& f, const std::string& path);

/// Wrappers giving raw objects a file name.
StructureFile as_structure_file(std::string name, Poset p);
StructureFile as_structure_file(std::string name, Algebra a);
StructureFile as_structure_file(std::string name, RelationalStructure s);

}  // namespace ultraposet
