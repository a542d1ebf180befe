#pragma once

#include <string>

#include "lungseg/volume.hpp"

namespace lungseg {

// Minimal NIfTI-1 single-file (.nii) support: 348-byte header, magic "n+1",
// datatype int16 or float32, dim[0] == 3. Files written here are little-endian;
// byte-swapped input is detected and swapped on load.

/// Load a volume; applies scl_slope/scl_inter when slope != 0 and clamps to HU range.
Volume load_nifti(const std::string& path);

/// Load an integer label grid without HU clamping (ground-truth / mask files).
LabelMask load_mask_nifti(const std::string& path);

/// Write labels as int16. Round-trips through load_mask_nifti bit-exactly.
void save_mask_nifti(const LabelMask& mask, const std::string& path);

/// Write a volume as float32 (values preserved exactly).
void save_volume_nifti(const Volume& vol, const std::string& path);

}  // namespace lungseg
