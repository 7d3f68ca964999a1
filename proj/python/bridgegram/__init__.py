# Copyright 2026 The Bridgegram Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Noise-resistant word embeddings with bridge-words."""

from ._bridgegram import (
    BridgegramError,
    Mode,
    Model,
    NormalizationDict,
    OutOfVocabulary,
    TrainConfig,
    TrainStats,
    bridge_words,
    char_ngrams,
    corrupt_segmentation,
    cosine,
    denormalize_text,
    fnv1a32,
    load_dict,
    normalize_word,
    spearman,
    tokenize,
    train,
)

__all__ = [
    "BridgegramError",
    "Mode",
    "Model",
    "NormalizationDict",
    "OutOfVocabulary",
    "TrainConfig",
    "TrainStats",
    "bridge_words",
    "char_ngrams",
    "corrupt_segmentation",
    "cosine",
    "denormalize_text",
    "fnv1a32",
    "load_dict",
    "normalize_word",
    "spearman",
    "tokenize",
    "train",
]
