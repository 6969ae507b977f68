// Umbrella header.
#pragma once

#include "docseg/baselines.hpp"
#include "docseg/config.hpp"
#include "docseg/corpus.hpp"
#include "docseg/embeddings.hpp"
#include "docseg/errors.hpp"
#include "docseg/eval.hpp"
#include "docseg/gradcheck.hpp"
#include "docseg/kernel.hpp"
#include "docseg/matrix.hpp"
#include "docseg/model.hpp"
#include "docseg/random.hpp"
#include "docseg/synthetic.hpp"
#include "docseg/training.hpp"
#include "docseg/vocab.hpp"
