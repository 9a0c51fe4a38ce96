#pragma once

#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace pathlet {

// Fully connected network with ReLU hidden layers, identity output and
// inverted dropout on hidden activations during training passes. Batches are
// column-major: one sample per column.
class Mlp {
 public:
  struct Layer {
    Eigen::MatrixXd weight;  // out x in
    Eigen::VectorXd bias;
  };

  struct Gradients {
    std::vector<Eigen::MatrixXd> weight;
    std::vector<Eigen::VectorXd> bias;
  };

  // Activations retained by a training pass for backpropagation.
  struct ForwardCache {
    std::vector<Eigen::MatrixXd> inputs;       // input to each layer
    std::vector<Eigen::MatrixXd> relu_masks;   // per hidden layer, 0/1
    std::vector<Eigen::MatrixXd> drop_masks;   // per hidden layer, 0 or 1/(1-p)
  };

  Mlp() = default;
  // Glorot-uniform weights, zero biases.
  Mlp(std::vector<int> sizes, double dropout_rate, std::mt19937_64& rng);
  static Mlp zeros(std::vector<int> sizes, double dropout_rate);

  int input_dim() const { return sizes_.front(); }
  int output_dim() const { return sizes_.back(); }
  const std::vector<int>& sizes() const { return sizes_; }
  double dropout_rate() const { return dropout_rate_; }
  std::vector<Layer>& layers() { return layers_; }
  const std::vector<Layer>& layers() const { return layers_; }

  // Inference pass; dropout disabled. Throws Error(kValidation) on a
  // dimension mismatch.
  Eigen::VectorXd forward(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd forward_batch(const Eigen::MatrixXd& x) const;

  // Training pass. Dropout masks are drawn from `rng` when it is non-null and
  // the dropout rate is positive.
  Eigen::MatrixXd forward_train(const Eigen::MatrixXd& x, ForwardCache& cache,
                                std::mt19937_64* rng) const;

  // Parameter gradients given dLoss/dOutput for the cached pass.
  Gradients backward(const ForwardCache& cache,
                     const Eigen::MatrixXd& grad_output) const;

  std::size_t parameter_count() const;
  // Layer by layer: weights column-major, then bias.
  std::vector<double> flat_parameters() const;
  void set_flat_parameters(std::span<const double> values);
  static std::vector<double> flatten(const Gradients& g);

 private:
  void check_input(Eigen::Index rows) const;

  std::vector<int> sizes_;
  double dropout_rate_ = 0.0;
  std::vector<Layer> layers_;
};

class Adam {
 public:
  Adam() = default;
  Adam(const Mlp& net, double learning_rate, double beta1 = 0.9,
       double beta2 = 0.999, double epsilon = 1e-8);

  void step(Mlp& net, const Mlp::Gradients& grads);

  long long steps() const { return t_; }
  const Mlp::Gradients& first_moment() const { return m_; }
  const Mlp::Gradients& second_moment() const { return v_; }
  void restore(Mlp::Gradients m, Mlp::Gradients v, long long t);

 private:
  double lr_ = 1e-3;
  double beta1_ = 0.9;
  double beta2_ = 0.999;
  double eps_ = 1e-8;
  long long t_ = 0;
  Mlp::Gradients m_;
  Mlp::Gradients v_;
};

double huber(double residual, double delta = 1.0);
double huber_derivative(double residual, double delta = 1.0);

}  // namespace pathlet
