#pragma once

#include <map>
#include <string>
#include <vector>

#include "rome/tensor.hpp"

namespace rome {

using GradMap = std::map<std::string, std::vector<double>>;
using ParamRefs = std::map<std::string, Value*>;

// Additive gradient buffers shared by the K-sample updates.
class GradientAccumulator {
 public:
    void add(const std::string& name, const std::vector<double>& grad);
    void scale(double factor);
    void clear();
    int count() const { return count_; }
    const GradMap& buffers() const { return buffers_; }

 private:
    GradMap buffers_;
    int count_ = 0;
};

class SgdMomentum {
 public:
    SgdMomentum(double lr, double momentum) : lr_(lr), momentum_(momentum) {}
    // lr_override < 0 uses the constructor lr.
    void step(const ParamRefs& params, const GradMap& grads, double lr_override = -1.0);

 private:
    double lr_, momentum_;
    GradMap velocity_;
};

class Adam {
 public:
    Adam(double lr, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8)
        : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {}
    void step(const ParamRefs& params, const GradMap& grads);

 private:
    double lr_, beta1_, beta2_, eps_;
    long t_ = 0;
    GradMap m_, v_;
};

// Cosine decay from base to 0 over total steps.
double cosine_lr(double base, int step, int total);

}  // namespace rome
