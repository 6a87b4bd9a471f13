#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qnlat/constraints.hpp"
#include "qnlat/counter.hpp"
#include "qnlat/error.hpp"
#include "qnlat/poset.hpp"
#include "qnlat/qn_lattice.hpp"
#include "qnlat/sigma.hpp"

namespace qnlat {

// ---------------------------------------------------------------------------
// Document model for the job-file format.
//
// The format is line oriented. `%` starts a comment that is dropped entirely;
// `\P<text>` is a comment line that is reproduced in the output; `\w <text>`
// inside an \edges or \constraints section attaches an annotation to the
// current token line, echoed as `; <text>`. Commas inside \constraints are
// token separators. A document is a preamble of settings commands followed by
// \beginjob ... \endofjob blocks and a final \enddata.
// ---------------------------------------------------------------------------

struct DocumentSettings {
  bool verbose = false;
  int subtrahend = 8;
  char join_symbol = '+';
  char meet_symbol = '*';

  OpKind kind_of(char symbol) const {
    return symbol == meet_symbol ? OpKind::Meet : OpKind::Join;
  }
  char symbol_of(OpKind k) const {
    return k == OpKind::Join ? join_symbol : meet_symbol;
  }

  friend bool operator==(const DocumentSettings& a,
                         const DocumentSettings& b) {
    return a.verbose == b.verbose && a.subtrahend == b.subtrahend &&
           a.join_symbol == b.join_symbol && a.meet_symbol == b.meet_symbol;
  }
};

struct ConstraintToken {
  OpKind kind;
  char left;
  char right;
  char result;

  friend bool operator==(const ConstraintToken& a, const ConstraintToken& b) {
    return a.kind == b.kind && a.left == b.left && a.right == b.right &&
           a.result == b.result;
  }
};

/// One physical token line. `raw` is the text before any `\w` marker (with
/// constraint commas already turned into spaces) and is preserved verbatim so
/// the output echo is byte-stable.
struct EdgeGroup {
  std::string raw;
  std::optional<std::string> annotation;
  std::vector<std::pair<char, char>> edges;
  int line = 0;

  friend bool operator==(const EdgeGroup& a, const EdgeGroup& b) {
    return a.raw == b.raw && a.annotation == b.annotation &&
           a.edges == b.edges;
  }
};

struct ConstraintGroup {
  std::string raw;
  std::optional<std::string> annotation;
  std::vector<ConstraintToken> tokens;
  int line = 0;

  friend bool operator==(const ConstraintGroup& a, const ConstraintGroup& b) {
    return a.raw == b.raw && a.annotation == b.annotation &&
           a.tokens == b.tokens;
  }
};

struct Job {
  std::string name;
  int declared_size = 0;
  std::string labels;
  std::vector<EdgeGroup> edges;
  std::vector<ConstraintGroup> constraints;
  int line = 0;        // \beginjob
  int size_line = 0;
  int elements_line = 0;
  int edges_line = 0;
  int constraints_line = 0;

  std::vector<std::pair<char, char>> edge_pairs() const {
    std::vector<std::pair<char, char>> out;
    for (const EdgeGroup& g : edges)
      out.insert(out.end(), g.edges.begin(), g.edges.end());
    return out;
  }

  std::vector<ConstraintToken> constraint_tokens() const {
    std::vector<ConstraintToken> out;
    for (const ConstraintGroup& g : constraints)
      out.insert(out.end(), g.tokens.begin(), g.tokens.end());
    return out;
  }

  friend bool operator==(const Job& a, const Job& b) {
    return a.name == b.name && a.declared_size == b.declared_size &&
           a.labels == b.labels && a.edges == b.edges &&
           a.constraints == b.constraints;
  }
};

struct PrintedComment {
  std::string text;
  int line = 0;

  friend bool operator==(const PrintedComment& a, const PrintedComment& b) {
    return a.text == b.text;
  }
};

using DocumentItem = std::variant<PrintedComment, Job>;

struct Document {
  DocumentSettings settings;
  std::vector<DocumentItem> items;

  std::vector<const Job*> jobs() const {
    std::vector<const Job*> out;
    for (const DocumentItem& it : items)
      if (const Job* j = std::get_if<Job>(&it)) out.push_back(j);
    return out;
  }

  friend bool operator==(const Document& a, const Document& b) {
    return a.settings == b.settings && a.items == b.items;
  }
};

// ---------------------------------------------------------------------------
// Shared line helpers
// ---------------------------------------------------------------------------

namespace detail {

inline std::string_view rtrim(std::string_view s) {
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

inline std::string_view ltrim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
    s.remove_prefix(1);
  return s;
}

inline std::string_view trim(std::string_view s) { return rtrim(ltrim(s)); }

inline bool is_blank(std::string_view s) { return trim(s).empty(); }

/// Splits lines, drops `%` comments and trailing `\r`.
inline std::vector<std::string> clean_lines(std::string_view text) {
  std::vector<std::string> out;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    std::string_view line = nl == std::string_view::npos
                                ? text.substr(pos)
                                : text.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    size_t pct = line.find('%');
    if (pct != std::string_view::npos) line = line.substr(0, pct);
    out.emplace_back(line);
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return out;
}

struct SplitLine {
  std::string raw;
  std::optional<std::string> annotation;
};

inline SplitLine split_annotation(std::string_view line) {
  size_t pos = line.find("\\w");
  if (pos == std::string_view::npos) return {std::string(line), std::nullopt};
  return {std::string(line.substr(0, pos)),
          std::string(line.substr(pos + 2))};
}

inline std::vector<std::string_view> split_tokens(std::string_view s) {
  std::vector<std::string_view> out;
  size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    size_t start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

inline EdgeGroup parse_edge_line(std::string_view content, int line) {
  SplitLine parts = split_annotation(content);
  EdgeGroup g;
  g.raw = parts.raw;
  g.annotation = parts.annotation;
  g.line = line;
  for (std::string_view tok : split_tokens(parts.raw)) {
    if (tok.size() != 2)
      throw Error(ErrorCode::MalformedToken,
                  "edge token '" + std::string(tok) +
                      "' must be two label characters",
                  line);
    g.edges.emplace_back(tok[0], tok[1]);
  }
  return g;
}

inline ConstraintGroup parse_constraint_line(std::string_view content,
                                             const DocumentSettings& settings,
                                             int line) {
  SplitLine parts = split_annotation(content);
  ConstraintGroup g;
  for (char& c : parts.raw)
    if (c == ',') c = ' ';
  g.raw = parts.raw;
  g.annotation = parts.annotation;
  g.line = line;
  for (std::string_view tok : split_tokens(g.raw)) {
    if (tok.size() != 5 || tok[3] != '=' ||
        (tok[1] != settings.join_symbol && tok[1] != settings.meet_symbol))
      throw Error(ErrorCode::MalformedToken,
                  "constraint token '" + std::string(tok) + "' is not of the "
                  "form x" + std::string(1, settings.join_symbol) + "y=z or x" +
                      std::string(1, settings.meet_symbol) + "y=z",
                  line);
    g.tokens.push_back(
        {settings.kind_of(tok[1]), tok[0], tok[2], tok[4]});
  }
  return g;
}

inline bool starts_with(std::string_view s, std::string_view prefix) {
  return s.size() >= prefix.size() && s.substr(0, prefix.size()) == prefix;
}

inline int parse_int_command(std::string_view value, std::string_view what,
                             int line) {
  std::string_view v = trim(value);
  bool neg = false;
  size_t i = 0;
  if (i < v.size() && (v[i] == '-' || v[i] == '+')) neg = v[i++] == '-';
  if (i >= v.size())
    throw Error(ErrorCode::MalformedCommand,
                std::string(what) + " needs an integer value", line);
  long out = 0;
  for (; i < v.size(); ++i) {
    if (v[i] < '0' || v[i] > '9')
      throw Error(ErrorCode::MalformedCommand,
                  std::string(what) + " needs an integer value", line);
    out = out * 10 + (v[i] - '0');
    if (out > 1000000)
      throw Error(ErrorCode::MalformedCommand,
                  std::string(what) + " value out of range", line);
  }
  return static_cast<int>(neg ? -out : out);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

inline Document parse_document(std::string_view text) {
  using namespace detail;
  Document doc;
  std::vector<std::string> lines = clean_lines(text);

  enum class Section { None, Name, Size, Elements, Edges, Constraints };
  bool in_job = false;
  bool saw_job = false;
  bool saw_enddata = false;
  Job job;
  Section section = Section::None;
  bool name_set = false, size_set = false;

  auto section_rank = [](Section s) { return static_cast<int>(s); };

  auto begin_section = [&](Section s, const char* name, int line) {
    if (section_rank(s) <= section_rank(section))
      throw Error(ErrorCode::BadSection,
                  std::string("section \\") + name +
                      " is duplicated or out of order",
                  line);
    section = s;
  };

  auto finalize_job = [&](int line) {
    if (!name_set) throw Error(ErrorCode::MissingSection, "\\name", line);
    if (!size_set) throw Error(ErrorCode::MissingSection, "\\size", line);
    if (job.labels.empty())
      throw Error(ErrorCode::MissingSection, "\\elements", line);
    if (static_cast<int>(job.labels.size()) != job.declared_size)
      throw Error(ErrorCode::SizeMismatch,
                  "declared size " + std::to_string(job.declared_size) +
                      " but " + std::to_string(job.labels.size()) +
                      " elements",
                  job.size_line);
    if (job.labels.size() > Poset::kMaxElements)
      throw Error(ErrorCode::TooManyElements,
                  "more than " + std::to_string(Poset::kMaxElements) +
                      " elements",
                  job.elements_line);
    bool present[256] = {};
    for (char c : job.labels) {
      unsigned char u = static_cast<unsigned char>(c);
      if (!label_char_ok(c) || c == doc.settings.join_symbol ||
          c == doc.settings.meet_symbol)
        throw Error(ErrorCode::InvalidLabel,
                    std::string("label '") + c + "' not allowed",
                    job.elements_line);
      if (present[u])
        throw Error(ErrorCode::DuplicateLabel,
                    std::string("label '") + c + "' declared twice",
                    job.elements_line);
      present[u] = true;
    }
    auto check_label = [&](char c, std::string_view tok, int tok_line) {
      if (!present[static_cast<unsigned char>(c)])
        throw Error(ErrorCode::UnknownLabel,
                    "'" + std::string(tok) + "' uses undeclared label '" +
                        std::string(1, c) + "'",
                    tok_line);
    };
    for (const EdgeGroup& g : job.edges)
      for (auto [a, b] : g.edges) {
        std::string tok{a, b};
        check_label(a, tok, g.line);
        check_label(b, tok, g.line);
      }
    for (const ConstraintGroup& g : job.constraints)
      for (const ConstraintToken& t : g.tokens) {
        std::string tok{t.left, doc.settings.symbol_of(t.kind), t.right, '=',
                        t.result};
        check_label(t.left, tok, g.line);
        check_label(t.right, tok, g.line);
        check_label(t.result, tok, g.line);
      }
    doc.items.emplace_back(std::move(job));
  };

  for (size_t idx = 0; idx < lines.size(); ++idx) {
    int line_no = static_cast<int>(idx) + 1;
    std::string_view line = lines[idx];
    if (is_blank(line)) continue;
    std::string_view stripped = ltrim(line);
    bool command = stripped.front() == '\\' && !starts_with(stripped, "\\w");

    if (!in_job) {
      if (!command)
        throw Error(ErrorCode::MalformedToken, "text outside any job",
                    line_no);
      std::string_view cmd = rtrim(stripped);
      if (starts_with(stripped, "\\P")) {
        doc.items.emplace_back(
            PrintedComment{std::string(stripped.substr(2)), line_no});
      } else if (cmd == "\\beginjob") {
        in_job = true;
        saw_job = true;
        job = Job{};
        job.line = line_no;
        section = Section::None;
        name_set = size_set = false;
      } else if (cmd == "\\enddata") {
        saw_enddata = true;
        break;
      } else if (starts_with(cmd, "\\verbose=")) {
        std::string_view v = trim(cmd.substr(9));
        if (v == "true")
          doc.settings.verbose = true;
        else if (v == "false")
          doc.settings.verbose = false;
        else
          throw Error(ErrorCode::MalformedCommand,
                      "\\verbose expects true or false", line_no);
      } else if (starts_with(cmd, "\\subtrahend-in-exponent=")) {
        int v = parse_int_command(cmd.substr(24), "\\subtrahend-in-exponent",
                                  line_no);
        if (v < -64 || v > 64)
          throw Error(ErrorCode::MalformedCommand,
                      "\\subtrahend-in-exponent value out of range", line_no);
        doc.settings.subtrahend = v;
      } else if (starts_with(cmd, "\\operationsymbols=")) {
        if (saw_job)
          throw Error(ErrorCode::MalformedCommand,
                      "\\operationsymbols must precede all jobs", line_no);
        std::string_view v = cmd.substr(18);
        if (v.size() != 2 || v[0] == v[1] || !label_char_ok(v[0]) ||
            !label_char_ok(v[1]))
          throw Error(ErrorCode::MalformedCommand,
                      "\\operationsymbols expects two distinct symbols",
                      line_no);
        doc.settings.join_symbol = v[0];
        doc.settings.meet_symbol = v[1];
      } else {
        throw Error(ErrorCode::UnknownCommand, std::string(cmd), line_no);
      }
      continue;
    }

    // inside a job
    if (command) {
      std::string_view cmd = rtrim(stripped);
      if (cmd == "\\endofjob") {
        finalize_job(line_no);
        in_job = false;
      } else if (cmd == "\\name" || starts_with(cmd, "\\name ")) {
        begin_section(Section::Name, "name", line_no);
        std::string_view rest = trim(cmd.substr(5));
        if (!rest.empty()) {
          job.name = std::string(rest);
          name_set = true;
        }
      } else if (cmd == "\\size" || starts_with(cmd, "\\size ")) {
        begin_section(Section::Size, "size", line_no);
        job.size_line = line_no;
        std::string_view rest = trim(cmd.substr(5));
        if (!rest.empty()) {
          job.declared_size = parse_int_command(rest, "\\size", line_no);
          size_set = true;
        }
      } else if (cmd == "\\elements" || starts_with(cmd, "\\elements ")) {
        begin_section(Section::Elements, "elements", line_no);
        job.elements_line = line_no;
        for (char c : trim(cmd.substr(9)))
          if (c != ' ' && c != '\t') job.labels += c;
      } else if (cmd == "\\edges" || starts_with(cmd, "\\edges ")) {
        begin_section(Section::Edges, "edges", line_no);
        job.edges_line = line_no;
        std::string_view rest = cmd.size() > 6 ? cmd.substr(7)
                                               : std::string_view{};
        if (!is_blank(rest))
          job.edges.push_back(detail::parse_edge_line(rest, line_no));
      } else if (cmd == "\\constraints" ||
                 starts_with(cmd, "\\constraints ")) {
        begin_section(Section::Constraints, "constraints", line_no);
        job.constraints_line = line_no;
        std::string_view rest = cmd.size() > 12 ? cmd.substr(13)
                                                : std::string_view{};
        if (!is_blank(rest))
          job.constraints.push_back(
              detail::parse_constraint_line(rest, doc.settings, line_no));
      } else if (cmd == "\\beginjob") {
        throw Error(ErrorCode::UnterminatedJob,
                    "\\beginjob before the previous \\endofjob", line_no);
      } else if (cmd == "\\enddata") {
        throw Error(ErrorCode::UnterminatedJob,
                    "\\enddata inside a job", line_no);
      } else {
        throw Error(ErrorCode::UnknownCommand, std::string(cmd), line_no);
      }
      continue;
    }

    // content line (may start with \w to annotate the previous group)
    switch (section) {
      case Section::Name: {
        if (name_set)
          throw Error(ErrorCode::MalformedToken,
                      "unexpected text after the job name", line_no);
        job.name = std::string(trim(line));
        name_set = true;
        break;
      }
      case Section::Size: {
        if (size_set)
          throw Error(ErrorCode::MalformedToken,
                      "unexpected text after the job size", line_no);
        job.declared_size =
            detail::parse_int_command(trim(line), "\\size", line_no);
        job.size_line = line_no;
        size_set = true;
        break;
      }
      case Section::Elements: {
        for (char c : line)
          if (c != ' ' && c != '\t') job.labels += c;
        break;
      }
      case Section::Edges: {
        if (starts_with(stripped, "\\w")) {
          if (job.edges.empty() || job.edges.back().annotation)
            throw Error(ErrorCode::MalformedToken,
                        "\\w annotation without a token line", line_no);
          job.edges.back().annotation = std::string(stripped.substr(2));
          break;
        }
        job.edges.push_back(detail::parse_edge_line(line, line_no));
        break;
      }
      case Section::Constraints: {
        if (starts_with(stripped, "\\w")) {
          if (job.constraints.empty() || job.constraints.back().annotation)
            throw Error(ErrorCode::MalformedToken,
                        "\\w annotation without a token line", line_no);
          job.constraints.back().annotation =
              std::string(stripped.substr(2));
          break;
        }
        job.constraints.push_back(
            detail::parse_constraint_line(line, doc.settings, line_no));
        break;
      }
      case Section::None:
        throw Error(ErrorCode::MalformedToken,
                    "tokens before any job section", line_no);
    }
  }

  if (in_job)
    throw Error(ErrorCode::UnterminatedJob,
                "job starting here has no \\endofjob", job.line);
  if (!saw_enddata)
    throw Error(ErrorCode::MissingEnddata, "no \\enddata marker",
                static_cast<int>(lines.size()));
  return doc;
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

namespace detail {

inline std::string display_line(const std::string& raw,
                                const std::optional<std::string>& annotation) {
  if (!annotation) return raw;
  return raw + ";" + *annotation;
}

inline std::string input_line(const std::string& raw,
                              const std::optional<std::string>& annotation) {
  if (!annotation) return raw;
  return raw + "\\w" + *annotation;
}

}  // namespace detail

/// Re-renders a parsed document in the input format; parsing the result
/// reproduces the same document.
inline std::string render_input(const Document& doc) {
  std::string out;
  out += "\\verbose=";
  out += doc.settings.verbose ? "true" : "false";
  out += '\n';
  out += "\\subtrahend-in-exponent=" + std::to_string(doc.settings.subtrahend) +
         "\n";
  out += "\\operationsymbols=";
  out += doc.settings.join_symbol;
  out += doc.settings.meet_symbol;
  out += "\n\n";
  for (const DocumentItem& item : doc.items) {
    if (const PrintedComment* c = std::get_if<PrintedComment>(&item)) {
      out += "\\P" + c->text + "\n";
      continue;
    }
    const Job& j = std::get<Job>(item);
    out += "\\beginjob\n";
    out += "\\name\n" + j.name + "\n";
    out += "\\size\n" + std::to_string(j.declared_size) + "\n";
    out += "\\elements\n" + j.labels + "\n";
    out += "\\edges\n";
    for (const EdgeGroup& g : j.edges)
      out += detail::input_line(g.raw, g.annotation) + "\n";
    out += "\\constraints\n";
    for (const ConstraintGroup& g : j.constraints)
      out += detail::input_line(g.raw, g.annotation) + "\n";
    out += "\\endofjob\n\n";
  }
  out += "\\enddata\n";
  return out;
}

/// Outcome of running one job. `lattice` is present in verbose mode.
struct JobResult {
  std::string name;
  bool ok = false;
  uint64_t sub_count = 0;
  SigmaValue sigma;
  std::string error;
  std::optional<QnLattice> lattice;
  int64_t elapsed_us = 0;
};

namespace detail {

inline void append_table_lines(std::string& out, const QnLattice& q, OpKind k,
                               const DocumentSettings& s) {
  const auto& entries = q.entries(k);
  if (entries.empty()) {
    out += "(none)\n";
    return;
  }
  std::string line;
  for (const TableEntry& e : entries) {
    std::string item;
    item += q.poset().label(e.x);
    item += s.symbol_of(k);
    item += q.poset().label(e.y);
    item += '=';
    item += q.poset().label(e.z);
    if (!line.empty() && line.size() + 1 + item.size() > 70) {
      out += line + "\n";
      line.clear();
    }
    if (!line.empty()) line += ' ';
    line += item;
  }
  if (!line.empty()) out += line + "\n";
}

}  // namespace detail

/// Renders results in the output layout: per job a header, the echoed edge
/// and constraint lines, the |Sub| result, and the sigma line with sixteen
/// fractional digits; printed comments stay at their positions and the
/// footer reports the elapsed time.
inline std::string render_output(const Document& doc,
                                 const std::vector<JobResult>& results,
                                 int64_t elapsed_ms) {
  std::vector<std::string> rendered;
  rendered.reserve(doc.items.size());
  size_t idx = 0;
  for (const DocumentItem& item : doc.items) {
    if (const PrintedComment* c = std::get_if<PrintedComment>(&item)) {
      rendered.push_back(c->text + "\n");
      continue;
    }
    const Job& j = std::get<Job>(item);
    const JobResult& r = results.at(idx++);
    std::string jb;
    jb += "L: " + j.name + "\n";
    jb += "|L|=" + std::to_string(j.declared_size) + ", L={" + j.labels +
          "}. Edges:\n";
    for (const EdgeGroup& g : j.edges)
      jb += detail::display_line(g.raw, g.annotation) + "\n";
    jb += "-- Constraints:\n";
    for (const ConstraintGroup& g : j.constraints)
      jb += detail::display_line(g.raw, g.annotation) + "\n";
    if (r.ok && r.lattice) {
      jb += "-- Determined join table:\n";
      detail::append_table_lines(jb, *r.lattice, OpKind::Join, doc.settings);
      jb += "-- Determined meet table:\n";
      detail::append_table_lines(jb, *r.lattice, OpKind::Meet, doc.settings);
    }
    if (!r.ok) {
      jb += "-- Error:   " + r.error + "\n";
    } else {
      jb += "-- Result:   |Sub(L)|=" + std::to_string(r.sub_count) +
            " for the partial lattice\n";
      jb += "-- " + j.name + ". Thus,\n";
      jb += "sigma(L) = |Sub(L)|*2^(" +
            std::to_string(doc.settings.subtrahend) + "-|L|) =   " +
            r.sigma.to_decimal(16) + " .\n";
    }
    rendered.push_back(std::move(jb));
  }
  // Leading comments flow directly into the first job block; each job block
  // together with its trailing comments is closed by one blank line.
  std::string out;
  size_t n = doc.items.size();
  for (size_t i = 0; i < n; ++i) {
    out += rendered[i];
    if (!std::holds_alternative<Job>(doc.items[i])) continue;
    size_t k = i + 1;
    while (k < n && std::holds_alternative<PrintedComment>(doc.items[k])) {
      out += rendered[k];
      ++k;
    }
    i = k - 1;
    out += "\n";
  }
  out += "The computation took " + std::to_string(elapsed_ms) +
         "/1000 seconds.\n";
  return out;
}

/// Comparison form for output files: trailing whitespace per line and the
/// elapsed-time figure are normalized, nothing else.
inline std::string normalize_output(std::string_view text) {
  std::string out;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    std::string_view line = nl == std::string_view::npos
                                ? text.substr(pos)
                                : text.substr(pos, nl - pos);
    line = detail::rtrim(line);
    if (detail::starts_with(line, "The computation took ") &&
        line.size() >= 14 &&
        line.substr(line.size() - 14) == "/1000 seconds.")
      out += "The computation took ?/1000 seconds.";
    else
      out += std::string(line);
    out += '\n';
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  while (!out.empty() && (out.back() == '\n' || out.back() == ' '))
    out.pop_back();
  out += '\n';
  return out;
}

}  // namespace qnlat
