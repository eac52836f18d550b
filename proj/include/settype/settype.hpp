#pragma once

#include "settype/anchors.hpp"
#include "settype/corpus_builder.hpp"
#include "settype/corpus_io.hpp"
#include "settype/decoder.hpp"
#include "settype/error.hpp"
#include "settype/evaluator.hpp"
#include "settype/feature_dict.hpp"
#include "settype/featurizer.hpp"
#include "settype/learner.hpp"
#include "settype/lexicon.hpp"
#include "settype/loss.hpp"
#include "settype/mention.hpp"
#include "settype/model.hpp"
#include "settype/model_io.hpp"
#include "settype/scoring.hpp"
#include "settype/sparse_vector.hpp"
#include "settype/type_builder.hpp"
#include "settype/type_system.hpp"
