#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "foldcast/dataset.hpp"
#include "foldcast/nn.hpp"

namespace foldcast {

struct DiagramRecord {
  double parameter = 0.0;
  ClassLabel truth = ClassLabel::Far;
  ClassLabel predicted = ClassLabel::Far;
  std::array<double, 3> probabilities{};
  /// The close/after boundary is fixed by the bifurcation, but the
  /// far/close split is an arbitrary convention. Grid records falling in
  /// the unsampled band between the far and close training ranges are
  /// graded leniently: either far or close counts as correct there,
  /// while predicting after before the fold stays an error.
  bool lenient = false;
};

/// Per-trajectory predictions over a parameter grid, one diagram per
/// coordinate pair.
struct PredictionDiagram {
  SystemKind system = SystemKind::NonlinearDamping;
  int coord_pair = 0;
  std::vector<DiagramRecord> records;
  double fold_value = 0.0;
};

enum class Verdict { Good, NoClose, Inaccurate, Wrong };

const char* verdict_name(Verdict v);

/// Declared policy making the paper-style prose labels mechanical.
struct VerdictThresholds {
  double far_after_cross_error = 0.20;
  double close_recall = 0.10;
  double overall_accuracy = 0.90;
};

/// Fraction of exact matches. Throws LengthMismatch.
double accuracy(const std::vector<ClassLabel>& predictions,
                const std::vector<ClassLabel>& truth);

/// Run the classifier on every sample of a test-grid dataset.
PredictionDiagram build_diagram(const nn::NetParams<float>& params,
                                const Dataset& test_ds);

/// Pool several diagrams (e.g. both coordinate pairs) into one record set
/// for verdict computation.
PredictionDiagram merge_diagrams(const std::vector<PredictionDiagram>& parts);

/// Wrong if far/after cross-misclassification exceeds the threshold, else
/// NoClose on poor close recall, else Inaccurate when fold-side accuracy
/// falls below the overall-accuracy bar, else Good. Lenient records count
/// toward the far row, with far and close predictions both correct.
/// Throws MissingClass unless all three true classes are present.
///
/// The Inaccurate gate grades fold-side correctness rather than exact
/// three-class accuracy: only the close/after boundary is fixed by the
/// bifurcation, so a prediction on the wrong side of the fold is an
/// error, while the position of the far-to-close transition on the
/// stable side is a matter of convention (kept in check qualitatively by
/// the NoClose and Wrong gates).
Verdict classify_verdict(const PredictionDiagram& diagram,
                         const VerdictThresholds& thresholds = {});

/// Fraction of records predicted correctly (lenient records per above).
double diagram_accuracy(const PredictionDiagram& diagram);

/// Fraction of records predicted on the correct side of the fold, i.e.
/// After vs not-After agreement between truth and prediction.
double fold_side_accuracy(const PredictionDiagram& diagram);

/// Table-style cross-system summary: one row per pipeline with the
/// nonlinear-damping accuracy and one verdict per extrapolation system.
class SummaryTable {
 public:
  void set_accuracy(PipelineKind pipeline, double value);
  void set_verdict(PipelineKind pipeline, SystemKind system, Verdict v);

  /// Throws Incomplete when any cell is missing.
  std::string to_csv() const;
  std::string to_text() const;

 private:
  struct Row {
    std::optional<double> accuracy;
    std::optional<Verdict> mob, vdp, pnp;
  };
  const Row& complete_row(int pipeline) const;
  Row rows_[5];
};

/// CSV: parameter, true_label, pred_label, p_far, p_close, p_after.
void write_diagram_csv(const PredictionDiagram& diagram,
                       const std::string& path);

/// Standalone scatter SVG: parameter on the horizontal axis, markers
/// colored by predicted class (green far, red close, blue after), vertical
/// line at the fold. Byte-deterministic for identical diagrams.
void emit_scatter_svg(const PredictionDiagram& diagram,
                      const std::string& path);

}  // namespace foldcast
