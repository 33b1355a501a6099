#pragma once

#include <string>

#include "socon/types.hpp"

namespace socon {

enum class EventFormat { jsonl, csv, infer };

// Reads the three dataset files and returns a canonicalized Dataset.
// Malformed rows raise ValidationError naming the file and row number.
Dataset ingest(const std::string& events_path, const std::string& reports_path,
               const std::string& participants_path, EventFormat format = EventFormat::infer);

// Writes the three dataset files in the canonical formats; emit followed by
// ingest reproduces the Dataset exactly.
void emit(const Dataset& ds, const std::string& events_path, const std::string& reports_path,
          const std::string& participants_path, EventFormat format = EventFormat::infer);

// Payload <-> JSON object text (used for JSONL rows and the CSV payload cell).
std::string payload_to_json(const Payload& p);
Payload payload_from_json(Modality m, const std::string& json_text, std::size_t line);

}  // namespace socon
