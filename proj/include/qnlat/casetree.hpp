#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qnlat/runner.hpp"
#include "qnlat/textio.hpp"

namespace qnlat {

// ---------------------------------------------------------------------------
// Case trees: a proof situation with nested subcases. Every leaf inherits the
// elements, edges, and constraints of all its ancestors; expanding a tree
// yields one flat job per leaf, in depth-first order.
//
// File format. The preamble may carry the same settings commands as a job
// document plus \threshold=<decimal>. The tree itself is
//
//   \begintree
//   \name            (base name, next line)
//   \elements ...    (sections as in job files; all but \name optional)
//   \edges ...
//   \constraints ...
//   \expect=<decimal>
//   \begincase
//   \suffix          (name fragment, next line; fragments concatenate
//                     along the path: C1 + a -> C1a, C1b + .2 -> C1b.2)
//   \note            (free text, appended to the names of jobs emitted
//                     for this node's leaves)
//   ... sections, then nested \begincase blocks ...
//   \endofcase
//   \endoftree
//   \enddata
// ---------------------------------------------------------------------------

struct CaseNode {
  std::string suffix;  // empty on the root
  std::string note;
  std::string added_labels;
  std::vector<EdgeGroup> edges;
  std::vector<ConstraintGroup> constraints;
  std::optional<SigmaValue> expected;
  std::vector<CaseNode> children;
  int line = 0;
};

struct CaseTree {
  std::string base_name;
  DocumentSettings settings;
  SigmaValue threshold = SigmaValue::from_int(83);
  CaseNode root;
};

namespace detail {

class TreeParser {
 public:
  explicit TreeParser(std::string_view text) : lines_(clean_lines(text)) {}

  CaseTree parse() {
    CaseTree tree;
    bool in_tree = false;
    bool tree_done = false;
    while (pos_ < lines_.size()) {
      int line_no = static_cast<int>(pos_) + 1;
      std::string_view line = lines_[pos_];
      ++pos_;
      if (is_blank(line)) continue;
      std::string_view cmd = rtrim(ltrim(line));
      if (cmd.empty() || cmd.front() != '\\')
        throw Error(ErrorCode::TreeSyntax, "text outside the tree", line_no);
      if (cmd == "\\begintree") {
        if (in_tree || tree_done)
          throw Error(ErrorCode::TreeSyntax, "unexpected \\begintree",
                      line_no);
        in_tree = true;
        parse_node(tree, tree.root, /*is_root=*/true, line_no);
        in_tree = false;
        tree_done = true;
      } else if (cmd == "\\enddata") {
        if (!tree_done)
          throw Error(ErrorCode::TreeSyntax, "\\enddata before \\endoftree",
                      line_no);
        return tree;
      } else if (starts_with(cmd, "\\threshold=")) {
        auto v = SigmaValue::parse(trim(cmd.substr(11)));
        if (!v)
          throw Error(ErrorCode::MalformedCommand,
                      "\\threshold expects an exact dyadic decimal", line_no);
        tree.threshold = *v;
      } else if (starts_with(cmd, "\\verbose=")) {
        std::string_view v = trim(cmd.substr(9));
        if (v == "true")
          tree.settings.verbose = true;
        else if (v == "false")
          tree.settings.verbose = false;
        else
          throw Error(ErrorCode::MalformedCommand,
                      "\\verbose expects true or false", line_no);
      } else if (starts_with(cmd, "\\subtrahend-in-exponent=")) {
        tree.settings.subtrahend =
            parse_int_command(cmd.substr(24), "\\subtrahend-in-exponent",
                              line_no);
      } else if (starts_with(cmd, "\\operationsymbols=")) {
        std::string_view v = cmd.substr(18);
        if (v.size() != 2 || v[0] == v[1] || !label_char_ok(v[0]) ||
            !label_char_ok(v[1]))
          throw Error(ErrorCode::MalformedCommand,
                      "\\operationsymbols expects two distinct symbols",
                      line_no);
        tree.settings.join_symbol = v[0];
        tree.settings.meet_symbol = v[1];
      } else if (starts_with(cmd, "\\P")) {
        // printed comments have no position in a tree; ignored
      } else {
        throw Error(ErrorCode::UnknownCommand, std::string(cmd), line_no);
      }
    }
    if (!tree_done)
      throw Error(ErrorCode::TreeSyntax, "missing \\begintree",
                  static_cast<int>(lines_.size()));
    throw Error(ErrorCode::MissingEnddata, "no \\enddata marker",
                static_cast<int>(lines_.size()));
  }

 private:
  enum class Section { None, Suffix, Name, Note, Elements, Edges,
                       Constraints };

  // Parses a node body up to its terminator (\endoftree for the root,
  // \endofcase otherwise). Child cases must follow all sections.
  void parse_node(CaseTree& tree, CaseNode& node, bool is_root,
                  int begin_line) {
    node.line = begin_line;
    Section section = Section::None;
    bool children_started = false;
    bool suffix_set = false, name_set = false, note_set = false;
    while (pos_ < lines_.size()) {
      int line_no = static_cast<int>(pos_) + 1;
      std::string_view line = lines_[pos_];
      ++pos_;
      if (is_blank(line)) continue;
      std::string_view stripped = ltrim(line);
      bool command = stripped.front() == '\\' && !starts_with(stripped, "\\w");
      if (command) {
        std::string_view cmd = rtrim(stripped);
        if (cmd == (is_root ? "\\endoftree" : "\\endofcase")) {
          if (is_root && tree.base_name.empty())
            throw Error(ErrorCode::MissingSection, "\\name", line_no);
          if (!is_root && node.suffix.empty())
            throw Error(ErrorCode::MissingSection, "\\suffix", line_no);
          check_children(node, line_no);
          return;
        }
        if (cmd == "\\begincase") {
          children_started = true;
          node.children.emplace_back();
          parse_node(tree, node.children.back(), /*is_root=*/false, line_no);
          continue;
        }
        if (children_started)
          throw Error(ErrorCode::TreeSyntax,
                      "sections must precede \\begincase blocks", line_no);
        if (cmd == "\\suffix") {
          if (is_root)
            throw Error(ErrorCode::TreeSyntax, "the root has no \\suffix",
                        line_no);
          section = Section::Suffix;
        } else if (cmd == "\\name") {
          if (!is_root)
            throw Error(ErrorCode::TreeSyntax,
                        "\\name belongs to the root; use \\suffix", line_no);
          section = Section::Name;
        } else if (cmd == "\\note") {
          section = Section::Note;
        } else if (cmd == "\\elements" || starts_with(cmd, "\\elements ")) {
          section = Section::Elements;
          for (char c : trim(cmd.substr(9)))
            if (c != ' ' && c != '\t') node.added_labels += c;
        } else if (cmd == "\\edges") {
          section = Section::Edges;
        } else if (cmd == "\\constraints") {
          section = Section::Constraints;
        } else if (starts_with(cmd, "\\expect=")) {
          auto v = SigmaValue::parse(trim(cmd.substr(8)));
          if (!v)
            throw Error(ErrorCode::MalformedCommand,
                        "\\expect expects an exact dyadic decimal", line_no);
          node.expected = *v;
        } else if (cmd == "\\endoftree" || cmd == "\\endofcase") {
          throw Error(ErrorCode::TreeSyntax,
                      std::string("unbalanced ") + std::string(cmd), line_no);
        } else {
          throw Error(ErrorCode::UnknownCommand, std::string(cmd), line_no);
        }
        continue;
      }
      switch (section) {
        case Section::Suffix:
          if (suffix_set)
            throw Error(ErrorCode::TreeSyntax, "\\suffix spans one line",
                        line_no);
          node.suffix = std::string(trim(line));
          suffix_set = true;
          break;
        case Section::Name:
          if (name_set)
            throw Error(ErrorCode::TreeSyntax, "\\name spans one line",
                        line_no);
          tree.base_name = std::string(trim(line));
          name_set = true;
          break;
        case Section::Note:
          if (note_set)
            throw Error(ErrorCode::TreeSyntax, "\\note spans one line",
                        line_no);
          node.note = std::string(trim(line));
          note_set = true;
          break;
        case Section::Elements:
          for (char c : line)
            if (c != ' ' && c != '\t') node.added_labels += c;
          break;
        case Section::Edges:
          if (starts_with(stripped, "\\w")) {
            if (node.edges.empty() || node.edges.back().annotation)
              throw Error(ErrorCode::MalformedToken,
                          "\\w annotation without a token line", line_no);
            node.edges.back().annotation = std::string(stripped.substr(2));
            break;
          }
          node.edges.push_back(parse_edge_line(line, line_no));
          break;
        case Section::Constraints:
          if (starts_with(stripped, "\\w")) {
            if (node.constraints.empty() ||
                node.constraints.back().annotation)
              throw Error(ErrorCode::MalformedToken,
                          "\\w annotation without a token line", line_no);
            node.constraints.back().annotation =
                std::string(stripped.substr(2));
            break;
          }
          node.constraints.push_back(
              parse_constraint_line(line, tree.settings, line_no));
          break;
        case Section::None:
          throw Error(ErrorCode::TreeSyntax, "tokens before any section",
                      line_no);
      }
    }
    throw Error(ErrorCode::TreeSyntax,
                is_root ? "tree without \\endoftree"
                        : "case without \\endofcase",
                begin_line);
  }

  static void check_children(const CaseNode& node, int line_no) {
    for (size_t i = 0; i < node.children.size(); ++i)
      for (size_t k = i + 1; k < node.children.size(); ++k)
        if (node.children[i].suffix == node.children[k].suffix)
          throw Error(ErrorCode::TreeSyntax,
                      "sibling cases share the suffix '" +
                          node.children[i].suffix + "'",
                      line_no);
  }

  std::vector<std::string> lines_;
  size_t pos_ = 0;
};

}  // namespace detail

inline CaseTree parse_tree(std::string_view text) {
  return detail::TreeParser(text).parse();
}

/// One accumulated proof situation: a node of the tree together with
/// everything it inherits from its ancestors.
struct Situation {
  std::string name;
  bool is_leaf = false;
  int depth = 0;
  std::optional<SigmaValue> expected;
  Job job;
};

namespace detail {

inline void accumulate(const CaseTree& tree, const CaseNode& node,
                       std::string path, Job acc, int depth,
                       std::vector<Situation>& out) {
  if (!node.suffix.empty()) path += node.suffix;
  for (char c : node.added_labels) {
    if (acc.labels.find(c) != std::string::npos)
      throw Error(ErrorCode::DuplicateLabelOnPath,
                  "label '" + std::string(1, c) +
                      "' is already declared on the path",
                  node.line);
    acc.labels += c;
  }
  auto check = [&](char c, const std::string& tok, int line) {
    if (acc.labels.find(c) == std::string::npos)
      throw Error(ErrorCode::ConstraintLabelNotOnPath,
                  "'" + tok + "' uses label '" + std::string(1, c) +
                      "' which no node on the path declares",
                  line);
  };
  for (const EdgeGroup& g : node.edges) {
    for (auto [a, b] : g.edges) {
      std::string tok{a, b};
      check(a, tok, g.line);
      check(b, tok, g.line);
    }
    acc.edges.push_back(g);
  }
  for (const ConstraintGroup& g : node.constraints) {
    for (const ConstraintToken& t : g.tokens) {
      std::string tok{t.left, tree.settings.symbol_of(t.kind), t.right, '=',
                      t.result};
      check(t.left, tok, g.line);
      check(t.right, tok, g.line);
      check(t.result, tok, g.line);
    }
    acc.constraints.push_back(g);
  }
  Situation s;
  s.name = tree.base_name;
  if (!path.empty()) s.name += "/" + path;
  if (!node.note.empty()) s.name += " " + node.note;
  s.is_leaf = node.children.empty();
  s.depth = depth;
  s.expected = node.expected;
  s.job = acc;
  s.job.name = s.name;
  s.job.declared_size = static_cast<int>(acc.labels.size());
  out.push_back(s);
  for (const CaseNode& child : node.children)
    accumulate(tree, child, path, acc, depth + 1, out);
}

}  // namespace detail

/// All situations of the tree in depth-first pre-order; the root comes first.
inline std::vector<Situation> expand_situations(const CaseTree& tree) {
  std::vector<Situation> out;
  detail::accumulate(tree, tree.root, "", Job{}, 0, out);
  return out;
}

/// The flat job document determined by the leaves, in left-to-right
/// depth-first order.
inline Document expand(const CaseTree& tree) {
  Document doc;
  doc.settings = tree.settings;
  for (const Situation& s : expand_situations(tree))
    if (s.is_leaf) doc.items.emplace_back(s.job);
  return doc;
}

struct AuditEntry {
  std::string name;
  bool is_leaf = false;
  JobResult result;
  std::optional<SigmaValue> expected;
  bool exceeds_threshold = false;   // leaf above the threshold: split needed
  bool redundant_split = false;     // internal node already at/below it
  bool expectation_mismatch = false;

  bool flagged() const {
    return exceeds_threshold || redundant_split || expectation_mismatch ||
           !result.ok;
  }
};

struct AuditReport {
  SigmaValue threshold;
  std::vector<AuditEntry> entries;

  bool clean() const {
    for (const AuditEntry& e : entries)
      if (e.flagged()) return false;
    return true;
  }
};

/// Runs every situation of the tree (internal nodes included) and flags
/// leaves whose sigma still exceeds the threshold, internal nodes whose own
/// sigma already meets it, and mismatches against recorded expectations.
inline AuditReport audit(const CaseTree& tree) {
  AuditReport report;
  report.threshold = tree.threshold;
  for (const Situation& s : expand_situations(tree)) {
    AuditEntry entry;
    entry.name = s.name;
    entry.is_leaf = s.is_leaf;
    entry.expected = s.expected;
    entry.result = run_job(s.job, tree.settings);
    if (entry.result.ok) {
      if (s.is_leaf && entry.result.sigma > tree.threshold)
        entry.exceeds_threshold = true;
      if (!s.is_leaf && entry.result.sigma <= tree.threshold)
        entry.redundant_split = true;
      if (s.expected && entry.result.sigma != *s.expected)
        entry.expectation_mismatch = true;
    }
    report.entries.push_back(std::move(entry));
  }
  return report;
}

}  // namespace qnlat
