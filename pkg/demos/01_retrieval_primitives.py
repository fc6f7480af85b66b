"""BM25, exact dense search, and the two fusion rules on a five-document corpus.

    python3 demos/01_retrieval_primitives.py
"""

from ragbench.corpus import Corpus, Document, Subset
from ragbench.fusion import ConvexConfig, RrfConfig, convex_fuse, rrf_fuse
from ragbench.lexical import Bm25Params, build_lexical_index, lexical_search
from ragbench.providers import HashEmbedder
from ragbench.vector import build_vector_index, vector_search

corpus = Corpus(
    [
        Document("d1", "Net income rose to 42 million in 2019", Subset.FINQA),
        Document("d2", "Revenue | 2018 | 2019\nTotal | 100 | 120", Subset.TATDQA),
        Document("d3", "The company repurchased shares worth 15 million", Subset.CONVFINQA),
        Document("d4", "Operating expenses fell by 3 percent in 2019", Subset.FINQA),
        Document("d5", "Dividends per share were 1.25 dollars", Subset.OTHER),
    ]
)
query = "total revenue in 2019"

sparse = lexical_search(build_lexical_index(corpus), query, Bm25Params(), k=5)
print("BM25      ", [(d, round(s, 3)) for d, s in sparse])

embedder = HashEmbedder(dimension=64)
index = build_vector_index(zip(corpus.doc_ids, embedder.embed([d.text for d in corpus])))
dense = vector_search(index, embedder.embed([query])[0], k=5)
print("dense     ", [(d, round(s, 3)) for d, s in dense])

print("RRF k=60  ", rrf_fuse([sparse, dense], RrfConfig(60), k=5).doc_ids)
for alpha in (0.0, 0.5, 1.0):
    print(f"CC a={alpha}  ", convex_fuse(sparse, dense, ConvexConfig(alpha), k=5).doc_ids)
