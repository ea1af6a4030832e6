#pragma once

#include <array>
#include <vector>

#include "qxai/simulator.hpp"

namespace qxai {

enum class ImageLabel { Bars, Stripes };

// 2x2 binary image, row-major pixels. Stripes have equal rows, bars equal
// columns; the two constant images are excluded.
struct BarsStripesImage {
  std::array<int, 4> pixels{};
  ImageLabel label = ImageLabel::Bars;

  // Stripes ↦ +1, Bars ↦ -1.
  double target() const { return label == ImageLabel::Stripes ? 1.0 : -1.0; }
  Eigen::Vector4d pixel_vector() const {
    return Eigen::Vector4d(pixels[0], pixels[1], pixels[2], pixels[3]);
  }
};

// The 4 non-degenerate 2x2 images: 2 bars, 2 stripes.
std::vector<BarsStripesImage> dataset();

enum class CircuitKind { SingleQubit, TwoQubit, FourQubit };

CircuitSpec reference_circuit(CircuitKind kind);

const char* circuit_kind_name(CircuitKind kind);
CircuitKind circuit_kind_from_name(const std::string& name);

// Affine pixel → angle map.
struct FeatureScaling {
  double zero = 0.0;
  double one = std::numbers::pi;

  double angle(double pixel) const { return zero + (one - zero) * pixel; }
  Eigen::VectorXd angles(const Eigen::VectorXd& pixels) const {
    return Eigen::VectorXd::Constant(pixels.size(), zero) + (one - zero) * pixels;
  }
};

struct TrainedModel {
  CircuitSpec circuit;
  Eigen::VectorXd controls;
  FeatureScaling scaling;

  // Image pixels feed circuit features in index order; trailing pixels are
  // ignored by circuits that encode fewer features.
  Eigen::VectorXd circuit_angles(const Eigen::VectorXd& pixels) const;
  double predict(const Eigen::VectorXd& pixels, const NoiseSpec& noise = {}) const;
  double accuracy(const std::vector<BarsStripesImage>& data) const;

  // Per-pixel encoding counts over an image of `pixel_count` pixels
  // (the circuit's multiplicity for encoded pixels, 0 for unused ones).
  std::vector<int> image_encoding_counts(int pixel_count = 4) const;

  // Callable over image-space ANGLE vectors (pixels already scaled); this is
  // what the explainers consume. Unused trailing coordinates are ignored.
  AngleModel angle_model(const NoiseSpec& noise = {}, int pixel_count = 4) const;
};

nlohmann::ordered_json model_to_json(const TrainedModel& model);
TrainedModel model_from_json(const nlohmann::json& j);

// d⟨Z⟩/dθ_j by the parameter-shift rule, summed over every gate bound to
// control j: [f(gate angle + π/2) - f(gate angle - π/2)] / 2 per gate.
Eigen::VectorXd parameter_shift_gradient(const CircuitSpec& circuit,
                                         const Eigen::VectorXd& features,
                                         const Eigen::VectorXd& controls);

struct TrainOptions {
  double lr = 0.2;
  int epochs = 300;
  std::uint64_t seed = 0;
};

struct TrainResult {
  TrainedModel model;
  double accuracy = 0.0;   // fraction of training images classified correctly
  double final_loss = 0.0;
  int epochs_run = 0;
};

// Full-batch gradient descent on squared loss against ±1 targets, gradients
// via the parameter-shift rule, exact simulation throughout. Never throws on
// non-convergence; the result carries the achieved accuracy.
TrainResult train(const CircuitSpec& circuit, const std::vector<BarsStripesImage>& data,
                  const TrainOptions& options = {});

}  // namespace qxai
