#include <fstream>
#include <sstream>

#include "catch2/catch_amalgamated.hpp"
#include "helpers.hpp"
#include "qnlat/runner.hpp"
#include "qnlat/textio.hpp"

using namespace qnlat;

namespace {

// the two-case sample file, commas and milestone comment included
const char* kSample =
    "\\P Version of August 17, 2019\n"
    "% ------------------------------ mile stone ------------------------\n"
    "\\verbose=false\n"
    "\\subtrahend-in-exponent=8 \n"
    "\\operationsymbols=+* \n"
    "\n"
    "\\beginjob\n"
    "\\name\n"
    "LmQ4/C1 d*m=a\n"
    "\\size\n"
    "9\n"
    "\\elements\n"
    "abmcdeijk\n"
    "\\edges\n"
    "ac am be bm ci dj ek ij jk mi\n"
    " ad \\w C1\n"
    "\\constraints \n"
    "a+b=m c+m=i d+m=j e+m=k, c*m=a e*m=b b+d=j e*j=b e*i=b\n"
    " d*m=a \\w C1\n"
    "\\endofjob\n"
    "\n"
    "\\beginjob\n"
    "\\name\n"
    "LmQ4/C2 d*m=:x>=A\n"
    "\\size\n"
    "10\n"
    "\\elements\n"
    "abmcdeijkx\n"
    "\\edges\n"
    "ac am be bm ci dj ek ij jk mi\n"
    " xd xm\n"
    "\\constraints \n"
    "a+b=m c+m=i d+m=j e+m=k, c*m=a e*m=b b+d=j e*j=b e*i=b\n"
    " d*m=x x+b=m\n"
    "\\endofjob\n"
    "\n"
    "\\P Also done: LmQ4/C (all cases)\n"
    "\\enddata\n";

ErrorCode code_of(const std::string& text) {
  try {
    parse_document(text);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected a parse error");
  return ErrorCode::IoError;
}

int line_of(const std::string& text) {
  try {
    parse_document(text);
  } catch (const Error& e) {
    return e.line();
  }
  return -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("parsing the two-case sample") {
  Document doc = parse_document(kSample);
  auto jobs = doc.jobs();
  REQUIRE(jobs.size() == 2);
  CHECK(jobs[0]->name == "LmQ4/C1 d*m=a");
  CHECK(jobs[1]->name == "LmQ4/C2 d*m=:x>=A");
  CHECK(jobs[0]->declared_size == 9);
  CHECK(jobs[1]->declared_size == 10);
  CHECK(jobs[0]->labels == "abmcdeijk");
  REQUIRE(jobs[0]->edges.size() == 2);
  CHECK(jobs[0]->edges[0].edges.size() == 10);
  CHECK(jobs[0]->edges[1].annotation == " C1");
  CHECK(jobs[0]->edges[1].raw == " ad ");
  // the comma separated tokens and is echoed as a space
  CHECK(jobs[0]->constraints[0].raw ==
        "a+b=m c+m=i d+m=j e+m=k  c*m=a e*m=b b+d=j e*j=b e*i=b");
  CHECK(jobs[0]->constraints[0].tokens.size() == 9);
  CHECK(doc.settings.subtrahend == 8);
  CHECK_FALSE(doc.settings.verbose);
}

TEST_CASE("running the sample reproduces the recorded results") {
  Document doc = parse_document(kSample);
  auto results = run_document(doc);
  REQUIRE(results.size() == 2);
  CHECK(results[0].sub_count == 158);
  CHECK(results[0].sigma == SigmaValue::from_int(79));
  CHECK(results[1].sub_count == 282);
  CHECK(results[1].sigma == *SigmaValue::parse("70.5"));

  std::string expected = slurp(std::string(QNLAT_CORPUS_DIR) +
                               "/expected/LmQ4-out.txt");
  CHECK(normalize_output(render_output(doc, results, 0)) ==
        normalize_output(expected));
}

TEST_CASE("an empty document") {
  Document doc = parse_document("\\enddata\n");
  CHECK(doc.items.empty());
  CHECK(run_document(doc).empty());
  CHECK(render_output(doc, {}, 5) ==
        "The computation took 5/1000 seconds.\n");
}

TEST_CASE("positioned parse errors") {
  CHECK(code_of("\\beginjob\n\\name\nX\n\\size\n9\n\\elements\nab\n"
                "\\endofjob\n\\enddata\n") == ErrorCode::SizeMismatch);
  CHECK(code_of("\\bogus\n\\enddata\n") == ErrorCode::UnknownCommand);
  CHECK(line_of("\\P ok\n\\bogus\n\\enddata\n") == 2);
  CHECK(code_of("\\beginjob\n\\name\nX\n") == ErrorCode::UnterminatedJob);
  CHECK(code_of("\\P nothing else\n") == ErrorCode::MissingEnddata);
  CHECK(code_of("stray tokens\n\\enddata\n") == ErrorCode::MalformedToken);
  CHECK(code_of("\\beginjob\n\\name\nX\n\\size\n2\n\\elements\nab\n"
                "\\edges\nac\n\\endofjob\n\\enddata\n") ==
        ErrorCode::UnknownLabel);
  CHECK(line_of("\\beginjob\n\\name\nX\n\\size\n2\n\\elements\nab\n"
                "\\edges\nac\n\\endofjob\n\\enddata\n") == 8);
  CHECK(code_of("\\beginjob\n\\name\nX\n\\size\n2\n\\elements\nab\n"
                "\\edges\nabc\n\\endofjob\n\\enddata\n") ==
        ErrorCode::MalformedToken);
  CHECK(code_of("\\beginjob\n\\name\nX\n\\size\n2\n\\elements\nab\n"
                "\\constraints\na?b=c\n\\endofjob\n\\enddata\n") ==
        ErrorCode::MalformedToken);
  CHECK(code_of("\\beginjob\n\\name\nX\n\\size\n2\n\\elements\naa\n"
                "\\endofjob\n\\enddata\n") == ErrorCode::DuplicateLabel);
  CHECK(code_of("\\beginjob\n\\name\nX\n\\size\n1\n\\elements\n+\n"
                "\\endofjob\n\\enddata\n") == ErrorCode::InvalidLabel);
  CHECK(code_of("\\beginjob\n\\size\n1\n\\elements\na\n\\endofjob\n"
                "\\enddata\n") == ErrorCode::MissingSection);
  CHECK(code_of("\\beginjob\n\\elements\na\n\\name\nX\n\\endofjob\n"
                "\\enddata\n") == ErrorCode::BadSection);
  CHECK(code_of("\\beginjob\n\\name\nX\n\\size\n1\n\\elements\na\n"
                "\\edges\n\\w floating\n\\endofjob\n\\enddata\n") ==
        ErrorCode::MalformedToken);
  CHECK(code_of("\\verbose=maybe\n\\enddata\n") ==
        ErrorCode::MalformedCommand);
  CHECK(code_of("\\operationsymbols=++\n\\enddata\n") ==
        ErrorCode::MalformedCommand);
}

TEST_CASE("comments never reach the parser") {
  Document doc = parse_document(
      "% full line comment\n"
      "\\beginjob % trailing\n\\name\nN % not part of the name\n"
      "\\size\n1 % one\n\\elements\na\n\\endofjob\n\\enddata\n");
  auto jobs = doc.jobs();
  REQUIRE(jobs.size() == 1);
  CHECK(jobs[0]->name == "N");
}

TEST_CASE("printed comments keep their positions") {
  Document doc = parse_document(
      "\\P first\n\\beginjob\n\\name\nJ\n\\size\n1\n\\elements\na\n"
      "\\endofjob\n\\P after\n\\enddata\n");
  REQUIRE(doc.items.size() == 3);
  CHECK(std::get<PrintedComment>(doc.items[0]).text == " first");
  CHECK(std::get<PrintedComment>(doc.items[2]).text == " after");
  auto results = run_document(doc);
  std::string out = render_output(doc, results, 0);
  CHECK(out.rfind(" first\nL: J\n", 0) == 0);
  CHECK(out.find("2^(8-|L|) =   256.0000000000000000 .\n after\n\n") !=
        std::string::npos);
}

TEST_CASE("same-line section values") {
  Document doc = parse_document(
      "\\beginjob\n\\name inline name\n\\size 2\n\\elements ab\n"
      "\\edges ab\n\\constraints\n\\endofjob\n\\enddata\n");
  auto jobs = doc.jobs();
  REQUIRE(jobs.size() == 1);
  CHECK(jobs[0]->name == "inline name");
  CHECK(jobs[0]->declared_size == 2);
  CHECK(jobs[0]->labels == "ab");
  CHECK(jobs[0]->edge_pairs().size() == 1);
}

TEST_CASE("annotation marker without a preceding space") {
  Document doc = parse_document(
      "\\beginjob\n\\name\nJ\n\\size\n3\n\\elements\napc\n"
      "\\edges\n ap pc\\w /C2\n\\constraints\n\\endofjob\n\\enddata\n");
  const Job* j = doc.jobs()[0];
  REQUIRE(j->edges.size() == 1);
  CHECK(j->edges[0].raw == " ap pc");
  CHECK(j->edges[0].annotation == " /C2");
  CHECK(detail::display_line(j->edges[0].raw, j->edges[0].annotation) ==
        " ap pc; /C2");
}

TEST_CASE("custom operation symbols") {
  Document doc = parse_document(
      "\\operationsymbols=^~\n\\beginjob\n\\name\nJ\n\\size\n3\n"
      "\\elements\nabm\n\\edges\nam bm\n\\constraints\na^b=m\n"
      "\\endofjob\n\\enddata\n");
  const Job* j = doc.jobs()[0];
  REQUIRE(j->constraints.size() == 1);
  CHECK(j->constraints[0].tokens[0].kind == OpKind::Join);
  auto results = run_document(doc);
  CHECK(results[0].sub_count == 7);  // {a,b} is the only non-closed subset
}

TEST_CASE("round trip through the input renderer") {
  Document doc = parse_document(kSample);
  Document again = parse_document(render_input(doc));
  CHECK(doc == again);
}

TEST_CASE("error isolation inside a batch") {
  std::string text =
      "\\beginjob\n\\name\nok1\n\\size\n1\n\\elements\na\n\\endofjob\n"
      "\\beginjob\n\\name\nbad\n\\size\n2\n\\elements\nab\n"
      "\\edges\nab ba\n\\constraints\n\\endofjob\n"
      "\\beginjob\n\\name\nok2\n\\size\n1\n\\elements\nb\n\\endofjob\n"
      "\\enddata\n";
  Document doc = parse_document(text);
  auto results = run_document(doc);
  REQUIRE(results.size() == 3);
  CHECK(results[0].ok);
  CHECK_FALSE(results[1].ok);
  CHECK(results[1].error.find("CycleDetected") != std::string::npos);
  CHECK(results[2].ok);
  std::string out = render_output(doc, results, 0);
  CHECK(out.find("-- Error:   CycleDetected") != std::string::npos);
}

TEST_CASE("verbose mode lists the determined tables") {
  std::string text = std::string(kSample);
  Document doc = parse_document(text);
  doc.settings.verbose = true;
  auto results = run_document(doc);
  std::string out = render_output(doc, results, 0);
  CHECK(out.find("-- Determined join table:\n") != std::string::npos);
  CHECK(out.find("a+b=m") != std::string::npos);
  CHECK(out.find("-- Determined meet table:\n") != std::string::npos);
}

TEST_CASE("output normalization") {
  CHECK(normalize_output("a \nb\t\nThe computation took 46/1000 seconds.\n") ==
        normalize_output("a\nb\nThe computation took 0/1000 seconds.\n"));
  CHECK(normalize_output("x\n") != normalize_output("y\n"));
}
