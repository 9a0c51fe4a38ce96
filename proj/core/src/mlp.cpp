#include "pathlet/mlp.hpp"

#include <cmath>
#include <string>

#include "pathlet/error.hpp"

namespace pathlet {

Mlp::Mlp(std::vector<int> sizes, double dropout_rate, std::mt19937_64& rng)
    : Mlp(zeros(std::move(sizes), dropout_rate)) {
  for (auto& layer : layers_) {
    const double fan_in = double(layer.weight.cols());
    const double fan_out = double(layer.weight.rows());
    const double limit = std::sqrt(6.0 / (fan_in + fan_out));
    std::uniform_real_distribution<double> dist(-limit, limit);
    for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) {
      for (Eigen::Index r = 0; r < layer.weight.rows(); ++r) {
        layer.weight(r, c) = dist(rng);
      }
    }
  }
}

Mlp Mlp::zeros(std::vector<int> sizes, double dropout_rate) {
  if (sizes.size() < 2) {
    throw Error(ErrorCode::kConfig, "network needs at least two layer sizes");
  }
  Mlp net;
  net.sizes_ = std::move(sizes);
  net.dropout_rate_ = dropout_rate;
  for (std::size_t l = 0; l + 1 < net.sizes_.size(); ++l) {
    net.layers_.push_back(
        Layer{Eigen::MatrixXd::Zero(net.sizes_[l + 1], net.sizes_[l]),
              Eigen::VectorXd::Zero(net.sizes_[l + 1])});
  }
  return net;
}

void Mlp::check_input(Eigen::Index rows) const {
  if (rows != input_dim()) {
    throw Error(ErrorCode::kValidation,
                "state has dimension " + std::to_string(rows) +
                    ", network expects " + std::to_string(input_dim()));
  }
}

Eigen::VectorXd Mlp::forward(const Eigen::VectorXd& x) const {
  return forward_batch(Eigen::MatrixXd(x)).col(0);
}

Eigen::MatrixXd Mlp::forward_batch(const Eigen::MatrixXd& x) const {
  check_input(x.rows());
  Eigen::MatrixXd h = x;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    Eigen::MatrixXd z = layers_[l].weight * h;
    z.colwise() += layers_[l].bias;
    if (l + 1 < layers_.size()) z = z.cwiseMax(0.0);
    h = std::move(z);
  }
  return h;
}

Eigen::MatrixXd Mlp::forward_train(const Eigen::MatrixXd& x,
                                   ForwardCache& cache,
                                   std::mt19937_64* rng) const {
  check_input(x.rows());
  cache = ForwardCache{};
  const bool drop = rng != nullptr && dropout_rate_ > 0.0;
  const double keep = 1.0 - dropout_rate_;
  std::bernoulli_distribution coin(keep);
  Eigen::MatrixXd h = x;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    cache.inputs.push_back(h);
    Eigen::MatrixXd z = layers_[l].weight * h;
    z.colwise() += layers_[l].bias;
    if (l + 1 < layers_.size()) {
      Eigen::MatrixXd relu = (z.array() > 0.0).cast<double>().matrix();
      Eigen::MatrixXd mask = Eigen::MatrixXd::Ones(z.rows(), z.cols());
      if (drop) {
        for (Eigen::Index c = 0; c < mask.cols(); ++c) {
          for (Eigen::Index r = 0; r < mask.rows(); ++r) {
            mask(r, c) = coin(*rng) ? 1.0 / keep : 0.0;
          }
        }
      }
      z = z.cwiseMax(0.0).cwiseProduct(mask);
      cache.relu_masks.push_back(std::move(relu));
      cache.drop_masks.push_back(std::move(mask));
    }
    h = std::move(z);
  }
  return h;
}

Mlp::Gradients Mlp::backward(const ForwardCache& cache,
                             const Eigen::MatrixXd& grad_output) const {
  Gradients g;
  g.weight.resize(layers_.size());
  g.bias.resize(layers_.size());
  Eigen::MatrixXd delta = grad_output;
  for (std::size_t l = layers_.size(); l-- > 0;) {
    g.weight[l] = delta * cache.inputs[l].transpose();
    g.bias[l] = delta.rowwise().sum();
    if (l > 0) {
      delta = layers_[l].weight.transpose() * delta;
      delta = delta.cwiseProduct(cache.drop_masks[l - 1])
                  .cwiseProduct(cache.relu_masks[l - 1]);
    }
  }
  return g;
}

std::size_t Mlp::parameter_count() const {
  std::size_t n = 0;
  for (const auto& layer : layers_) {
    n += std::size_t(layer.weight.size() + layer.bias.size());
  }
  return n;
}

std::vector<double> Mlp::flat_parameters() const {
  std::vector<double> out;
  out.reserve(parameter_count());
  for (const auto& layer : layers_) {
    out.insert(out.end(), layer.weight.data(),
               layer.weight.data() + layer.weight.size());
    out.insert(out.end(), layer.bias.data(),
               layer.bias.data() + layer.bias.size());
  }
  return out;
}

void Mlp::set_flat_parameters(std::span<const double> values) {
  if (values.size() != parameter_count()) {
    throw Error(ErrorCode::kValidation, "parameter vector has wrong length");
  }
  std::size_t i = 0;
  for (auto& layer : layers_) {
    std::copy_n(values.begin() + i, layer.weight.size(), layer.weight.data());
    i += layer.weight.size();
    std::copy_n(values.begin() + i, layer.bias.size(), layer.bias.data());
    i += layer.bias.size();
  }
}

std::vector<double> Mlp::flatten(const Gradients& g) {
  std::vector<double> out;
  for (std::size_t l = 0; l < g.weight.size(); ++l) {
    out.insert(out.end(), g.weight[l].data(),
               g.weight[l].data() + g.weight[l].size());
    out.insert(out.end(), g.bias[l].data(), g.bias[l].data() + g.bias[l].size());
  }
  return out;
}

Adam::Adam(const Mlp& net, double learning_rate, double beta1, double beta2,
           double epsilon)
    : lr_(learning_rate), beta1_(beta1), beta2_(beta2), eps_(epsilon) {
  for (const auto& layer : net.layers()) {
    m_.weight.push_back(Eigen::MatrixXd::Zero(layer.weight.rows(),
                                              layer.weight.cols()));
    m_.bias.push_back(Eigen::VectorXd::Zero(layer.bias.size()));
  }
  v_ = m_;
}

void Adam::step(Mlp& net, const Mlp::Gradients& grads) {
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, double(t_));
  const double c2 = 1.0 - std::pow(beta2_, double(t_));
  auto update = [&](auto& param, auto& m, auto& v, const auto& g) {
    m = beta1_ * m + (1.0 - beta1_) * g;
    v = beta2_ * v + (1.0 - beta2_) * g.cwiseProduct(g);
    param.array() -=
        lr_ * (m.array() / c1) / ((v.array() / c2).sqrt() + eps_);
  };
  auto& layers = net.layers();
  for (std::size_t l = 0; l < layers.size(); ++l) {
    update(layers[l].weight, m_.weight[l], v_.weight[l], grads.weight[l]);
    update(layers[l].bias, m_.bias[l], v_.bias[l], grads.bias[l]);
  }
}

void Adam::restore(Mlp::Gradients m, Mlp::Gradients v, long long t) {
  m_ = std::move(m);
  v_ = std::move(v);
  t_ = t;
}

double huber(double residual, double delta) {
  const double a = std::abs(residual);
  return a <= delta ? 0.5 * residual * residual : delta * (a - 0.5 * delta);
}

double huber_derivative(double residual, double delta) {
  if (residual > delta) return delta;
  if (residual < -delta) return -delta;
  return residual;
}

}  // namespace pathlet
