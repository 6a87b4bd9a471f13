#pragma once

#include <atomic>
#include <chrono>
#include <thread>
#include <vector>

#include "qnlat/counter.hpp"
#include "qnlat/textio.hpp"

namespace qnlat {

struct RunOptions {
  int workers = 1;
};

/// Builds the poset, validates the constraints, closes them and counts the
/// subuniverses of one job. Never throws; failures land in the result.
inline JobResult run_job(const Job& job, const DocumentSettings& settings) {
  JobResult r;
  r.name = job.name;
  auto start = std::chrono::steady_clock::now();
  try {
    Poset poset = Poset::build(job.labels, job.edge_pairs(),
                               job.edges_line ? job.edges_line : job.line);
    ConstraintSet cs;
    for (const ConstraintToken& t : job.constraint_tokens())
      cs.push_back({t.kind, *poset.find(t.left), *poset.find(t.right),
                    *poset.find(t.result)});
    ConstraintSet validated =
        validate_constraints(poset, cs,
                             job.constraints_line ? job.constraints_line
                                                  : job.line);
    QnLattice lattice = QnLattice::close(poset, validated);
    r.sub_count = count_subuniverses(lattice);
    r.sigma = SigmaValue::of_count(r.sub_count, poset.size(),
                                   settings.subtrahend);
    if (settings.verbose) r.lattice = std::move(lattice);
    r.ok = true;
  } catch (const Error& e) {
    r.error = e.what();
  }
  r.elapsed_us = std::chrono::duration_cast<std::chrono::microseconds>(
                     std::chrono::steady_clock::now() - start)
                     .count();
  return r;
}

/// Runs every job of the document, in document order. Jobs are independent;
/// with more than one worker they run concurrently, results keep their
/// positions. Per-job errors are recorded, never fatal to the batch.
inline std::vector<JobResult> run_document(const Document& doc,
                                           RunOptions options = {}) {
  std::vector<const Job*> jobs = doc.jobs();
  std::vector<JobResult> results(jobs.size());
  int workers = options.workers;
  if (workers < 1) workers = 1;
  if (workers == 1 || jobs.size() <= 1) {
    for (size_t i = 0; i < jobs.size(); ++i)
      results[i] = run_job(*jobs[i], doc.settings);
    return results;
  }
  std::atomic<size_t> next{0};
  auto work = [&] {
    for (;;) {
      size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      results[i] = run_job(*jobs[i], doc.settings);
    }
  };
  std::vector<std::thread> pool;
  int spawn = std::min<int>(workers, static_cast<int>(jobs.size()));
  pool.reserve(spawn);
  for (int t = 0; t < spawn; ++t) pool.emplace_back(work);
  for (std::thread& t : pool) t.join();
  return results;
}

}  // namespace qnlat
