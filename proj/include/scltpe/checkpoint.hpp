#pragma once

#include <string>
#include <vector>

#include "scltpe/classifier.hpp"
#include "scltpe/dataset.hpp"
#include "scltpe/encoder.hpp"

namespace scltpe {

// A fully trained model plus everything needed to score new data: the
// normalization fitted on its training split, the class vocabulary, and the
// temperature it was trained with. Text format, round-trip exact.
struct Checkpoint {
    double tau = 0.0;
    NormalizationStats stats;
    std::vector<std::string> class_names;
    EncoderParams encoder;
    ClassifierParams head;

    void save(const std::string& path) const;
    static Checkpoint load(const std::string& path);
};

}  // namespace scltpe
