#include "foldcast/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace foldcast {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Good:
      return "good";
    case Verdict::NoClose:
      return "no close";
    case Verdict::Inaccurate:
      return "inaccurate";
    case Verdict::Wrong:
      return "wrong";
  }
  return "?";
}

double accuracy(const std::vector<ClassLabel>& predictions,
                const std::vector<ClassLabel>& truth) {
  if (predictions.size() != truth.size() || truth.empty())
    throw LengthMismatch("accuracy: label sequences of unequal or zero length");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < truth.size(); ++i)
    if (predictions[i] == truth[i]) ++hits;
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

PredictionDiagram build_diagram(const nn::NetParams<float>& params,
                                const Dataset& test_ds) {
  if (test_ds.samples.empty())
    throw LengthMismatch("build_diagram: empty dataset");
  PredictionDiagram d;
  d.system = test_ds.samples.front().system;
  d.coord_pair = test_ds.pipeline.coord_pair;
  d.fold_value = test_ds.fold_value;
  d.records.reserve(test_ds.samples.size());
  const int direction =
      d.system == SystemKind::MassOnBelt ? -1 : +1;
  for (const auto& s : test_ds.samples) {
    const auto [label, probs] = nn::predict(params, s.channel);
    DiagramRecord r{s.bifurcation_param, s.label, label, probs};
    if (d.fold_value > 0.0) {
      const double g =
          1.0 + direction * (s.bifurcation_param - d.fold_value) /
                    d.fold_value;
      // The far/close split is a convention; the band between the far and
      // close training ranges has no defined truth label.
      r.lenient = g <= 1.0 && g > test_ds.plan.far_hi &&
                  g < test_ds.plan.close_lo;
    }
    d.records.push_back(r);
  }
  return d;
}

PredictionDiagram merge_diagrams(const std::vector<PredictionDiagram>& parts) {
  if (parts.empty()) throw LengthMismatch("merge_diagrams: nothing to merge");
  PredictionDiagram out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i)
    out.records.insert(out.records.end(), parts[i].records.begin(),
                       parts[i].records.end());
  return out;
}

Verdict classify_verdict(const PredictionDiagram& diagram,
                         const VerdictThresholds& thresholds) {
  const int kFar = static_cast<int>(ClassLabel::Far);
  const int kAfter = static_cast<int>(ClassLabel::After);
  std::size_t n_true[3] = {0, 0, 0};
  std::size_t confusion[3][3] = {};
  for (const auto& r : diagram.records) {
    if (r.lenient) {
      // Boundary-band record: count as far, with close accepted.
      ++n_true[kFar];
      ++confusion[kFar][r.predicted == ClassLabel::After ? kAfter : kFar];
      continue;
    }
    ++n_true[static_cast<int>(r.truth)];
    ++confusion[static_cast<int>(r.truth)][static_cast<int>(r.predicted)];
  }
  if (n_true[0] == 0 || n_true[1] == 0 || n_true[2] == 0)
    throw MissingClass("classify_verdict: diagram must cover all three classes");

  const int far = static_cast<int>(ClassLabel::Far);
  const int close = static_cast<int>(ClassLabel::Close);
  const int after = static_cast<int>(ClassLabel::After);

  const double cross =
      static_cast<double>(confusion[far][after] + confusion[after][far]) /
      static_cast<double>(n_true[far] + n_true[after]);
  if (cross > thresholds.far_after_cross_error) return Verdict::Wrong;

  const double close_recall = static_cast<double>(confusion[close][close]) /
                              static_cast<double>(n_true[close]);
  if (close_recall < thresholds.close_recall) return Verdict::NoClose;

  if (fold_side_accuracy(diagram) < thresholds.overall_accuracy)
    return Verdict::Inaccurate;
  return Verdict::Good;
}

double fold_side_accuracy(const PredictionDiagram& diagram) {
  if (diagram.records.empty())
    throw LengthMismatch("fold_side_accuracy: empty diagram");
  std::size_t hits = 0;
  for (const auto& r : diagram.records)
    if ((r.truth == ClassLabel::After) == (r.predicted == ClassLabel::After))
      ++hits;
  return static_cast<double>(hits) /
         static_cast<double>(diagram.records.size());
}

double diagram_accuracy(const PredictionDiagram& diagram) {
  std::size_t hits = 0;
  for (const auto& r : diagram.records) {
    if (r.lenient
            ? r.predicted != ClassLabel::After
            : r.truth == r.predicted)
      ++hits;
  }
  return static_cast<double>(hits) /
         static_cast<double>(diagram.records.size());
}

// Summary table -------------------------------------------------------------

namespace {

const char* kRowNames[5] = {"Min-max", "Polar", "Pol-MovMean", "Pol-log",
                            "Pol-log-MovMean"};

}  // namespace

void SummaryTable::set_accuracy(PipelineKind pipeline, double value) {
  rows_[static_cast<int>(pipeline)].accuracy = value;
}

void SummaryTable::set_verdict(PipelineKind pipeline, SystemKind system,
                               Verdict v) {
  Row& row = rows_[static_cast<int>(pipeline)];
  switch (system) {
    case SystemKind::MassOnBelt:
      row.mob = v;
      return;
    case SystemKind::VdpDuffing:
      row.vdp = v;
      return;
    case SystemKind::PitchPlunge:
      row.pnp = v;
      return;
    default:
      throw Incomplete("summary verdicts cover the three extrapolation systems");
  }
}

const SummaryTable::Row& SummaryTable::complete_row(int pipeline) const {
  const Row& row = rows_[pipeline];
  if (!row.accuracy || !row.mob || !row.vdp || !row.pnp)
    throw Incomplete(std::string("summary cell missing for pipeline ") +
                     kRowNames[pipeline]);
  return row;
}

std::string SummaryTable::to_csv() const {
  std::ostringstream os;
  os << "normalization,nld_c1_0.1_accuracy,mass_on_belt,vdp_duffing,"
        "pitch_plunge\n";
  char buf[32];
  for (int i = 0; i < 5; ++i) {
    const Row& row = complete_row(i);
    std::snprintf(buf, sizeof(buf), "%.1f", 100.0 * *row.accuracy);
    os << kRowNames[i] << ',' << buf << "%," << verdict_name(*row.mob) << ','
       << verdict_name(*row.vdp) << ',' << verdict_name(*row.pnp) << '\n';
  }
  return os.str();
}

std::string SummaryTable::to_text() const {
  std::ostringstream os;
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%-16s %-12s %-12s %-12s %-12s\n",
                "normalization", "nld c1=0.1", "mass-belt", "vdp-duffing",
                "pitch-plunge");
  os << buf;
  for (int i = 0; i < 5; ++i) {
    const Row& row = complete_row(i);
    char acc[16];
    std::snprintf(acc, sizeof(acc), "%.1f%%", 100.0 * *row.accuracy);
    std::snprintf(buf, sizeof(buf), "%-16s %-12s %-12s %-12s %-12s\n",
                  kRowNames[i], acc, verdict_name(*row.mob),
                  verdict_name(*row.vdp), verdict_name(*row.pnp));
    os << buf;
  }
  return os.str();
}

// Artifacts -----------------------------------------------------------------

void write_diagram_csv(const PredictionDiagram& diagram,
                       const std::string& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open for writing: " + path);
  os << "parameter,true_label,pred_label,p_far,p_close,p_after\n";
  char buf[160];
  for (const auto& r : diagram.records) {
    std::snprintf(buf, sizeof(buf), "%.17g,%s,%s,%.9g,%.9g,%.9g\n",
                  r.parameter, label_name(r.truth), label_name(r.predicted),
                  r.probabilities[0], r.probabilities[1], r.probabilities[2]);
    os << buf;
  }
  if (!os) throw IoError("write failed: " + path);
}

void emit_scatter_svg(const PredictionDiagram& diagram,
                      const std::string& path) {
  if (diagram.records.empty())
    throw LengthMismatch("emit_scatter_svg: empty diagram");

  constexpr double kWidth = 720, kHeight = 420;
  constexpr double kLeft = 60, kRight = 20, kTop = 20, kBottom = 50;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;

  double lo = diagram.records.front().parameter;
  double hi = lo;
  for (const auto& r : diagram.records) {
    lo = std::min(lo, r.parameter);
    hi = std::max(hi, r.parameter);
  }
  lo = std::min(lo, diagram.fold_value);
  hi = std::max(hi, diagram.fold_value);
  const double pad = (hi > lo ? 0.05 * (hi - lo) : 1.0);
  lo -= pad;
  hi += pad;

  const auto x_of = [&](double p) {
    return kLeft + (p - lo) / (hi - lo) * plot_w;
  };
  // Vertical position: confidence of the predicted class.
  const auto y_of = [&](double conf) { return kTop + (1.0 - conf) * plot_h; };

  static const char* kColors[3] = {"#2ca02c", "#d62728", "#1f77b4"};

  std::ofstream os(path);
  if (!os) throw IoError("cannot open for writing: " + path);
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%g\" "
                "height=\"%g\" viewBox=\"0 0 %g %g\">\n",
                kWidth, kHeight, kWidth, kHeight);
  os << buf << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  std::snprintf(buf, sizeof(buf),
                "<line x1=\"%.3f\" y1=\"%.3f\" x2=\"%.3f\" y2=\"%.3f\" "
                "stroke=\"black\"/>\n",
                kLeft, kTop + plot_h, kLeft + plot_w, kTop + plot_h);
  os << buf;
  std::snprintf(buf, sizeof(buf),
                "<line x1=\"%.3f\" y1=\"%.3f\" x2=\"%.3f\" y2=\"%.3f\" "
                "stroke=\"black\"/>\n",
                kLeft, kTop, kLeft, kTop + plot_h);
  os << buf;
  // Fold marker.
  std::snprintf(buf, sizeof(buf),
                "<line x1=\"%.3f\" y1=\"%.3f\" x2=\"%.3f\" y2=\"%.3f\" "
                "stroke=\"#888\" stroke-dasharray=\"5,4\"/>\n",
                x_of(diagram.fold_value), kTop, x_of(diagram.fold_value),
                kTop + plot_h);
  os << buf;
  std::snprintf(buf, sizeof(buf),
                "<text x=\"%.3f\" y=\"%.3f\" font-size=\"13\" "
                "text-anchor=\"middle\">%s parameter</text>\n",
                kLeft + plot_w / 2, kHeight - 12, system_name(diagram.system));
  os << buf;
  for (const auto& r : diagram.records) {
    const double conf = r.probabilities[static_cast<int>(r.predicted)];
    std::snprintf(buf, sizeof(buf),
                  "<circle cx=\"%.3f\" cy=\"%.3f\" r=\"3\" fill=\"%s\" "
                  "fill-opacity=\"0.7\"/>\n",
                  x_of(r.parameter), y_of(conf),
                  kColors[static_cast<int>(r.predicted)]);
    os << buf;
  }
  os << "</svg>\n";
  if (!os) throw IoError("write failed: " + path);
}

}  // namespace foldcast
