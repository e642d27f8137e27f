// Copyright 2026 The radex Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RADEX_TESTS_FIXTURES_H_
#define RADEX_TESTS_FIXTURES_H_

#include "radex/corpus.h"

namespace radex::testing {

// The worked example report: every pathology mention except the calcified
// granuloma is negated.
inline Report WorkedExampleReport() {
  return Report{
      "example",
      "The cardiomediastinal silhouette is within normal limits for size and "
      "contour. The lungs are normally inflated without evidence of focal "
      "airspace disease, pleural effusion, or pneumothorax. Stable calcified "
      "granuloma within the right upper lung. No acute bone abnormality.",
      "No acute cardiopulmonary process.",
      {"Calcified Granuloma"}};
}

inline Report SampleReport1() {
  return Report{
      "sample1",
      "Moderate cardiomegaly. Mild bilateral costophrenic XXXX blunting and "
      "fissural thickening, interstitial opacities greatest in the central lungs "
      "and bases with indistinct vascular margination. Dense right lower lobe "
      "nodule and right hilar calcifications suggest a previous granulomatous "
      "process.",
      "1. Cardiomegaly and small bilateral pleural effusions 2. Abnormal "
      "pulmonary opacities most suggestive of pulmonary edema, primary "
      "differential diagnosis atypical infection and inflammation",
      {"Calcinosis", "Cardiomegaly", "Costophrenic Angle", "Density", "Nodule",
       "Opacity", "Pleural Effusion", "Pulmonary Congestion", "Pulmonary Edema",
       "Thickening"}};
}

inline Report SampleReport2() {
  return Report{
      "sample2",
      "Heart size within normal limits. There is focal left lateral base airspace "
      "disease. There is a 6 mm nodular opacity in the right midlung. No "
      "pneumothorax. No pleural effusion. No displaced rib fractures. There is an "
      "apparent deformity of the right. humeral surgical neck. This is not seen "
      "on the comparison. Correlate clinically with history of fracture.",
      "Left base airspace disease and nodular opacity in the right midlung.",
      {"Airspace Disease", "Deformity", "Opacity"}};
}

inline Report SampleReport3() {
  return Report{
      "sample3",
      "The lungs and pleural spaces show no acute abnormality. XXXX scar in the "
      "right lateral midlung. Adjacent focal pleural thickening is noted. Chronic "
      "blunting of both lateral costophrenic XXXX. Heart size and pulmonary "
      "vascularity within normal limits. Tortuous, ectatic thoracic aorta, "
      "unchanged. XXXX sternotomy XXXX intact.",
      "No acute pulmonary abnormality.",
      {"Aorta, Thoracic", "Cicatrix", "Costophrenic Angle", "Thickening"}};
}

}  // namespace radex::testing

#endif  // RADEX_TESTS_FIXTURES_H_
