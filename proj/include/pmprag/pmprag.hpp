#pragma once

// Everything except the socket-backed transport (pmprag/http_client.hpp).

#include "pmprag/bm25.hpp"
#include "pmprag/core.hpp"
#include "pmprag/datasets.hpp"
#include "pmprag/error.hpp"
#include "pmprag/evaluation.hpp"
#include "pmprag/http.hpp"
#include "pmprag/keyword_extraction.hpp"
#include "pmprag/llm_gateway.hpp"
#include "pmprag/prompt_pipeline.hpp"
#include "pmprag/runner.hpp"
#include "pmprag/templates.hpp"
#include "pmprag/text.hpp"
#include "pmprag/word_retrieval.hpp"
