#pragma once

#include <string>

#include "clts/cotrain.hpp"
#include "clts/seed_transfer.hpp"
#include "clts/sparse_logreg.hpp"
#include "clts/vectorizer.hpp"

namespace clts {

// Self-describing JSON artifacts: every file carries a magic string, a format
// version, and its kind. Weights are stored as (class, column, value) triplets
// with shortest-round-trip doubles, so load(save(x)) == x bit for bit and
// saving the same object twice produces byte-identical files. Loading a file
// with the wrong magic, version, or kind is an error naming the problem.
void save_model(const Vocabulary& v, const std::string& path);
void save_model(const WeightMatrix& w, const std::string& path);
void save_model(const SeedSet& s, const std::string& path);
void save_model(const TranslatedSeedSet& t, const std::string& path);
void save_model(const TeacherMatrix& z, const std::string& path);
void save_model(const StudentModel& m, const std::string& path);

Vocabulary load_vocabulary(const std::string& path);
WeightMatrix load_weight_matrix(const std::string& path);
SeedSet load_seed_set(const std::string& path);
TranslatedSeedSet load_translated_seed_set(const std::string& path);
TeacherMatrix load_teacher_matrix(const std::string& path);
StudentModel load_student_model(const std::string& path);

// FNV-1a over the file bytes, as 16 hex digits.
std::string file_digest_hex(const std::string& path);

}  // namespace clts
