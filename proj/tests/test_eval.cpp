#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>

#include "foldcast/eval.hpp"

using namespace foldcast;
namespace fs = std::filesystem;

namespace {

DiagramRecord rec(ClassLabel truth, ClassLabel pred) {
  DiagramRecord r;
  r.truth = truth;
  r.predicted = pred;
  r.probabilities = {1.0 / 3, 1.0 / 3, 1.0 / 3};
  return r;
}

/// n records per true class; `wrong` of them get the given wrong label.
PredictionDiagram synthetic_diagram(int per_class, int far_as_after,
                                    int close_as_far, int after_as_far,
                                    int after_as_close = 0) {
  PredictionDiagram d;
  d.fold_value = 2.0;
  int i = 0;
  auto push = [&](ClassLabel truth, ClassLabel pred) {
    auto r = rec(truth, pred);
    r.parameter = 0.1 * ++i;
    d.records.push_back(r);
  };
  for (int k = 0; k < per_class; ++k)
    push(ClassLabel::Far,
         k < far_as_after ? ClassLabel::After : ClassLabel::Far);
  for (int k = 0; k < per_class; ++k)
    push(ClassLabel::Close,
         k < close_as_far ? ClassLabel::Far : ClassLabel::Close);
  for (int k = 0; k < per_class; ++k)
    push(ClassLabel::After, k < after_as_far        ? ClassLabel::Far
                            : k < after_as_far + after_as_close
                                ? ClassLabel::Close
                                : ClassLabel::After);
  return d;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)), {});
}

}  // namespace

TEST_CASE("accuracy") {
  using L = ClassLabel;
  CHECK(accuracy({L::Far, L::Close, L::After}, {L::Far, L::Close, L::After}) ==
        doctest::Approx(1.0));
  CHECK(accuracy({L::Far, L::Far, L::After, L::Close},
                 {L::Far, L::Close, L::After, L::Close}) ==
        doctest::Approx(0.75));
  CHECK_THROWS_AS(accuracy({}, {}), LengthMismatch);
  CHECK_THROWS_AS(accuracy({L::Far}, {L::Far, L::Far}), LengthMismatch);
}

TEST_CASE("classify_verdict") {
  CHECK(std::string(verdict_name(Verdict::Good)) == "good");

  // All correct.
  CHECK(classify_verdict(synthetic_diagram(10, 0, 0, 0)) == Verdict::Good);

  // 5 of the 20 far/after records cross-misclassified: 25% > 20% -> Wrong,
  // and this dominates everything else.
  CHECK(classify_verdict(synthetic_diagram(10, 5, 10, 0)) == Verdict::Wrong);
  CHECK(classify_verdict(synthetic_diagram(10, 0, 0, 5)) == Verdict::Wrong);

  // Close recall 0: NoClose even though the cross error (15%) passes.
  CHECK(classify_verdict(synthetic_diagram(10, 3, 10, 0)) == Verdict::NoClose);
  CHECK(classify_verdict(synthetic_diagram(10, 0, 10, 0)) == Verdict::NoClose);

  // Close->far errors stay on the stable side of the fold: the far/close
  // transition point is a convention, so the verdict stays Good as long
  // as close recall holds up.
  CHECK(classify_verdict(synthetic_diagram(10, 0, 4, 0)) == Verdict::Good);

  // After->close errors cross the fold boundary: 4/30 fold-side errors
  // push side accuracy to 86.7% < 90% -> Inaccurate (cross error stays 0,
  // since close is outside the far/after pool).
  CHECK(classify_verdict(synthetic_diagram(10, 0, 0, 0, 4)) ==
        Verdict::Inaccurate);

  // Exactly 20% cross error (4 of 20) is not Wrong; those four far->after
  // records are fold-side errors (side accuracy 26/30) -> Inaccurate.
  CHECK(classify_verdict(synthetic_diagram(10, 4, 2, 0)) ==
        Verdict::Inaccurate);

  // fold_side_accuracy ignores far/close mixing entirely.
  CHECK(fold_side_accuracy(synthetic_diagram(10, 0, 4, 0)) ==
        doctest::Approx(1.0));
  CHECK(fold_side_accuracy(synthetic_diagram(10, 4, 0, 3)) ==
        doctest::Approx(23.0 / 30.0));

  // Missing class.
  PredictionDiagram d;
  d.records = {rec(ClassLabel::Far, ClassLabel::Far),
               rec(ClassLabel::After, ClassLabel::After)};
  CHECK_THROWS_AS(classify_verdict(d), MissingClass);

  // Lenient boundary-band records: close predictions are fine, after
  // predictions count as far->after cross errors.
  auto with_gap = synthetic_diagram(10, 0, 0, 0);
  for (int k = 0; k < 8; ++k) {
    auto r = rec(ClassLabel::Far, ClassLabel::Close);
    r.lenient = true;
    with_gap.records.push_back(r);
  }
  CHECK(classify_verdict(with_gap) == Verdict::Good);
  CHECK(diagram_accuracy(with_gap) == doctest::Approx(1.0));
  for (int k = 0; k < 9; ++k) {
    auto r = rec(ClassLabel::Far, ClassLabel::After);
    r.lenient = true;
    with_gap.records.push_back(r);
  }
  // 9 cross errors over 10 + 8 + 9 + 10 far/after rows: 24% -> Wrong.
  CHECK(classify_verdict(with_gap) == Verdict::Wrong);

  // Record order does not matter.
  auto base = synthetic_diagram(10, 0, 4, 0);
  auto shuffled = base;
  std::shuffle(shuffled.records.begin(), shuffled.records.end(),
               std::mt19937(99));
  CHECK(classify_verdict(shuffled) == classify_verdict(base));
}

TEST_CASE("merge_diagrams pools records") {
  const auto a = synthetic_diagram(2, 0, 0, 0);
  auto b = synthetic_diagram(3, 1, 0, 0);
  b.coord_pair = 1;
  const auto merged = merge_diagrams({a, b});
  CHECK(merged.records.size() == a.records.size() + b.records.size());
  CHECK(merged.fold_value == a.fold_value);
  CHECK(diagram_accuracy(merged) == doctest::Approx(14.0 / 15.0));
  CHECK_THROWS_AS(merge_diagrams({}), LengthMismatch);
}

TEST_CASE("summary table") {
  SummaryTable table;
  for (int p = 0; p < 5; ++p) {
    const auto kind = static_cast<PipelineKind>(p);
    table.set_accuracy(kind, 0.9 + 0.01 * p);
    table.set_verdict(kind, SystemKind::MassOnBelt, Verdict::Good);
    table.set_verdict(kind, SystemKind::VdpDuffing, Verdict::NoClose);
    table.set_verdict(kind, SystemKind::PitchPlunge,
                      p == 0 ? Verdict::Wrong : Verdict::Good);
  }
  const auto csv = table.to_csv();
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);  // header + 5 rows
  CHECK(csv.find("Min-max") != std::string::npos);
  CHECK(csv.find("Pol-log-MovMean") != std::string::npos);
  CHECK(csv.find("no close") != std::string::npos);
  CHECK(csv.find("wrong") != std::string::npos);

  const auto text = table.to_text();
  CHECK(text.find("90.0%") != std::string::npos);
  CHECK(text.find("good") != std::string::npos);

  SummaryTable partial;
  partial.set_accuracy(PipelineKind::MinMax, 0.8);
  CHECK_THROWS_AS(partial.to_csv(), Incomplete);
}

TEST_CASE("diagram csv and svg are deterministic") {
  auto d = synthetic_diagram(3, 1, 0, 0);
  d.records[0].probabilities = {0.7, 0.2, 0.1};

  const auto csv_path = (fs::temp_directory_path() / "fc_diag.csv").string();
  write_diagram_csv(d, csv_path);
  const auto csv1 = slurp(csv_path);
  write_diagram_csv(d, csv_path);
  CHECK(csv1 == slurp(csv_path));
  CHECK(csv1.find("parameter,") == 0);
  CHECK(std::count(csv1.begin(), csv1.end(), '\n') ==
        static_cast<long>(d.records.size()) + 1);
  CHECK(csv1.find("0.7") != std::string::npos);
  fs::remove(csv_path);

  const auto svg_path = (fs::temp_directory_path() / "fc_diag.svg").string();
  emit_scatter_svg(d, svg_path);
  const auto svg1 = slurp(svg_path);
  emit_scatter_svg(d, svg_path);
  CHECK(svg1 == slurp(svg_path));
  CHECK(svg1.find("<svg") != std::string::npos);
  CHECK(std::count(svg1.begin(), svg1.end(), 'c') >= 9);  // circle markers
  const auto markers = [&](const std::string& s) {
    std::size_t n = 0, pos = 0;
    while ((pos = s.find("<circle", pos)) != std::string::npos) {
      ++n;
      pos += 7;
    }
    return n;
  };
  CHECK(markers(svg1) == d.records.size());
  fs::remove(svg_path);

  PredictionDiagram empty;
  CHECK_THROWS_AS(emit_scatter_svg(empty, svg_path), LengthMismatch);
}

TEST_CASE("build_diagram: zero parameters predict the first class") {
  const auto params = nn::NetParams<float>::zeros();
  const std::vector<double> grid{0.5, 2.5};
  PipelineSpec spec;
  spec.resample_len = 128;
  const auto ds = sample_test_grid(SystemKind::NonlinearDamping,
                                   NldParams{0.1}, grid, 2, spec, 5);
  const auto diagram = build_diagram(params, ds);
  REQUIRE(diagram.records.size() == ds.samples.size());
  for (const auto& r : diagram.records) {
    CHECK(r.predicted == ClassLabel::Far);  // uniform softmax tie-break
    const double sum =
        r.probabilities[0] + r.probabilities[1] + r.probabilities[2];
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-5));
  }
}
