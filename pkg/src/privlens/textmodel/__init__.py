"""Text preprocessing, TF-IDF features, K-Means clustering, and LDA topics."""

from .kmeans import KMeans, top_terms
from .labels import LabelMap, MissingLabelError, apply_label_map, label_counts
from .lda import LatentDirichletAllocation, topic_top_terms
from .preprocess import (
    Preprocessor,
    drop_stopwords,
    explode_by_hashtags,
    exploded_total,
    lemmatize,
    load_lemmas,
    load_stopwords,
    load_wordlist,
    normalize,
    tokenize,
)
from .tfidf import TermMatrix, TfidfVectorizer, Vocabulary

__all__ = [
    "KMeans",
    "LabelMap",
    "LatentDirichletAllocation",
    "MissingLabelError",
    "Preprocessor",
    "TermMatrix",
    "TfidfVectorizer",
    "Vocabulary",
    "apply_label_map",
    "drop_stopwords",
    "explode_by_hashtags",
    "exploded_total",
    "label_counts",
    "lemmatize",
    "load_lemmas",
    "load_stopwords",
    "load_wordlist",
    "normalize",
    "tokenize",
    "top_terms",
    "topic_top_terms",
]
