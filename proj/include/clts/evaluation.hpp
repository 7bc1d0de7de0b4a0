#pragma once

#include <cstdint>
#include <vector>

#include "clts/corpus.hpp"
#include "clts/cotrain.hpp"

namespace clts {

// preds may contain -1 (no prediction); it never matches a gold label.
double accuracy(const std::vector<int>& preds, const std::vector<int>& gold);

// Unweighted mean of per-class F1. A class with precision + recall == 0
// contributes 0. Classes absent from both preds and gold still count.
double macro_f1(const std::vector<int>& preds, const std::vector<int>& gold, int num_classes);

struct Metrics {
  double accuracy = 0;
  double macro_f1 = 0;
};

struct TeacherEval {
  Metrics metrics;
  double coverage = 0;
};

// Covered documents are scored by argmax of the teacher's soft label (ties to
// the lowest class index); uncovered documents count as mistakes.
TeacherEval evaluate_teacher(const TeacherMatrix& z, const Corpus& test, const Vocabulary& vocab,
                             TeacherInput input = TeacherInput::binary);

Metrics evaluate_student(const StudentModel& m, const Corpus& test);

// {7, 20, 42, 127, 1993}
std::vector<uint64_t> default_eval_seeds();

struct SeedStat {
  double mean = 0;
  double stddev = 0;  // population standard deviation
};

SeedStat mean_stddev(const std::vector<double>& values);

}  // namespace clts
