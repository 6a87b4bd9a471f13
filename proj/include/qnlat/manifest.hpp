#pragma once

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "qnlat/error.hpp"
#include "qnlat/sigma.hpp"
#include "qnlat/textio.hpp"

namespace qnlat {

/// Expected results, one line per job: <name> TAB <|Sub|> TAB <sigma>.
struct ManifestEntry {
  std::string name;
  uint64_t sub_count = 0;
  SigmaValue sigma;
};

inline std::vector<ManifestEntry> parse_manifest(std::string_view text) {
  std::vector<ManifestEntry> out;
  std::unordered_map<std::string, size_t> index;
  int line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    std::string_view line = nl == std::string_view::npos
                                ? text.substr(pos)
                                : text.substr(pos, nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (detail::is_blank(line) || line.front() == '#') continue;
    size_t t1 = line.find('\t');
    size_t t2 = t1 == std::string_view::npos ? std::string_view::npos
                                             : line.find('\t', t1 + 1);
    if (t2 == std::string_view::npos)
      throw Error(ErrorCode::BadManifest,
                  "expected <name> TAB <count> TAB <sigma>", line_no);
    ManifestEntry e;
    e.name = std::string(line.substr(0, t1));
    std::string_view count = line.substr(t1 + 1, t2 - t1 - 1);
    std::string_view sigma = detail::rtrim(line.substr(t2 + 1));
    if (count.empty())
      throw Error(ErrorCode::BadManifest, "empty count field", line_no);
    uint64_t c = 0;
    for (char ch : count) {
      if (ch < '0' || ch > '9')
        throw Error(ErrorCode::BadManifest, "count is not a number", line_no);
      c = c * 10 + (ch - '0');
    }
    e.sub_count = c;
    auto s = SigmaValue::parse(sigma);
    if (!s)
      throw Error(ErrorCode::BadManifest,
                  "sigma is not an exact dyadic decimal", line_no);
    e.sigma = *s;
    if (index.count(e.name))
      throw Error(ErrorCode::BadManifest, "duplicate job name " + e.name,
                  line_no);
    index[e.name] = out.size();
    out.push_back(std::move(e));
  }
  return out;
}

inline std::string render_manifest(const std::vector<ManifestEntry>& entries) {
  std::string out;
  for (const ManifestEntry& e : entries)
    out += e.name + "\t" + std::to_string(e.sub_count) + "\t" +
           e.sigma.to_decimal_trimmed() + "\n";
  return out;
}

struct VerifyMismatch {
  std::string name;
  ManifestEntry expected;
  JobResult got;
};

struct VerifyOutcome {
  std::vector<VerifyMismatch> mismatches;
  std::vector<std::string> missing_jobs;  // manifest entries with no job
  std::vector<std::string> extra_jobs;    // jobs with no manifest entry

  bool ok() const { return mismatches.empty(); }
};

/// Matches results against a manifest by job name. Only jobs present in both
/// can mismatch; unmatched entries on either side are warnings.
inline VerifyOutcome verify_results(const std::vector<JobResult>& results,
                                    const std::vector<ManifestEntry>& manifest) {
  VerifyOutcome out;
  std::unordered_map<std::string, const ManifestEntry*> by_name;
  std::unordered_map<std::string, bool> used;
  for (const ManifestEntry& e : manifest) {
    by_name[e.name] = &e;
    used[e.name] = false;
  }
  for (const JobResult& r : results) {
    auto it = by_name.find(r.name);
    if (it == by_name.end()) {
      out.extra_jobs.push_back(r.name);
      continue;
    }
    used[r.name] = true;
    const ManifestEntry& want = *it->second;
    bool match = r.ok && r.sub_count == want.sub_count &&
                 r.sigma == want.sigma;
    if (!match) out.mismatches.push_back({r.name, want, r});
  }
  for (const ManifestEntry& e : manifest)
    if (!used[e.name]) out.missing_jobs.push_back(e.name);
  return out;
}

}  // namespace qnlat
