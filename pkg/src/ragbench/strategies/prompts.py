"""Prompt templates for every LLM-dependent step, with file overrides."""

from __future__ import annotations

from dataclasses import dataclass, fields, replace
from pathlib import Path
from string import Formatter

GENERATION = """\
Answer the following question based ONLY on
the provided context.
If the answer is a number, provide just the
number. If you cannot answer from the
context, say "UNANSWERABLE".

Context:
{context}

Question: {question}

Answer:"""

HYDE = """\
Given the following question about financial
data, write a short passage that would
contain the answer. Include specific numbers
and financial terms.
Question: {query}
Passage:"""

HYDE_FALLBACK = """\
Please write a short passage that directly
answers the following question. The passage
should be factual, detailed, and roughly
the length of a typical encyclopedia
paragraph.

Question: {query}

Passage:"""

MULTI_QUERY = """\
You are a helpful assistant that generates
alternative search queries. Given the
following question, generate {n} alternative
phrasings that capture the same information
need but use different wording or
perspectives. Return each query on its own
line, numbered (e.g. 1. ... 2. ...).
Do not include any other text.

Original question: {query}

Alternative queries:"""

CRAG_EVAL = """\
You are a relevance evaluator. Given a
question and a retrieved document, classify
the document's relevance to answering the
question.

Question: {query}
Document: {document}

Respond with exactly one of:
- RELEVANT: The document contains
  information that directly helps answer
  the question.
- AMBIGUOUS: The document is partially
  relevant or tangentially related but
  may not fully answer the question.
- IRRELEVANT: The document does not
  contain useful information for
  answering the question.

Classification:"""

CRAG_REWRITE = """\
The following question was used to search a
financial document corpus, but the retrieved
results were not sufficiently relevant.

Original question: {query}

Please rewrite this question to be more
specific and likely to retrieve the correct
financial document. Focus on including
specific financial terms, company names,
time periods, or metric names that would
appear in the target document.

Rewritten question:"""

CONTEXTUAL_CHUNK = """\
Here is the full document:
<document>
{document}
</document>

Here is a chunk from that document:
<chunk>
{chunk}
</chunk>

Please give a short, succinct context
(2-3 sentences) to situate this chunk
within the overall document for the
purposes of improving search retrieval
of the chunk. Answer only with the
context, nothing else."""

CONTEXTUAL_WHOLE = """\
Here is a document:
<document>
{document}
</document>

Please provide a concise summary context
(2-3 sentences) that captures the key
topics and entities in this document, for
the purpose of improving search retrieval.
Answer only with the context, nothing else."""

# placeholders each operation fills in
REQUIRED_FIELDS = {
    "generation": {"context", "question"},
    "hyde": {"query"},
    "hyde_fallback": {"query"},
    "multi_query": {"n", "query"},
    "crag_eval": {"query", "document"},
    "crag_rewrite": {"query"},
    "contextual_chunk": {"document", "chunk"},
    "contextual_whole": {"document"},
}


def placeholders(template: str) -> set[str]:
    return {name for _, name, _, _ in Formatter().parse(template) if name}


def render(template: str, **values: object) -> str:
    """Substitute ``{name}`` placeholders without touching any other braces.

    ``str.format`` would choke on literal braces inside interpolated document
    text, so substitution is done field by field on the parsed template.
    """
    out = []
    for literal, name, _, _ in Formatter().parse(template):
        out.append(literal)
        if name:
            out.append(str(values[name]))
    return "".join(out)


@dataclass(frozen=True)
class PromptLibrary:
    generation: str = GENERATION
    hyde: str | None = HYDE
    hyde_fallback: str = HYDE_FALLBACK
    multi_query: str = MULTI_QUERY
    crag_eval: str = CRAG_EVAL
    crag_rewrite: str = CRAG_REWRITE
    contextual_chunk: str = CONTEXTUAL_CHUNK
    contextual_whole: str = CONTEXTUAL_WHOLE

    def __post_init__(self) -> None:
        for f in fields(self):
            template = getattr(self, f.name)
            if template is None:
                continue
            missing = REQUIRED_FIELDS[f.name] - placeholders(template)
            if missing:
                raise ValueError(f"template {f.name!r} lacks placeholder(s) {sorted(missing)}")

    @property
    def hyde_template(self) -> str:
        return self.hyde if self.hyde is not None else self.hyde_fallback

    @classmethod
    def from_directory(cls, directory: str | Path) -> "PromptLibrary":
        """Override defaults with ``<name>.txt`` files found in ``directory``."""
        directory = Path(directory)
        overrides = {}
        for f in fields(cls):
            path = directory / f"{f.name}.txt"
            if path.exists():
                overrides[f.name] = path.read_text(encoding="utf-8")
        return replace(cls(), **overrides)
