#pragma once

#include "exonscan/candidates.hpp"
#include "exonscan/error.hpp"
#include "exonscan/eval.hpp"
#include "exonscan/pipeline.hpp"
#include "exonscan/random.hpp"
#include "exonscan/seqio.hpp"
#include "exonscan/spectral.hpp"
#include "exonscan/svm.hpp"
#include "exonscan/synth.hpp"
#include "exonscan/types.hpp"
