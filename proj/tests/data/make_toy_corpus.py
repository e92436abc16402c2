"""Generates the separable toy ranking corpus committed under tests/data.

Relevance is lexical overlap: each query names two words of one topic and its
single positive candidate contains both plus one more word of that topic.
Negatives hold three words of another topic, so every candidate has the same
length. Run from this directory: python3 make_toy_corpus.py
"""
import json
import random

TOPICS = {
    "astronomy": ["planet", "orbit", "comet", "galaxy"],
    "cooking": ["recipe", "oven", "flour", "butter"],
    "finance": ["loan", "interest", "mortgage", "credit"],
    "gardening": ["soil", "seed", "compost", "prune"],
}
DOC_WORDS = 3
QUERY_TEMPLATES = [
    "what is the {a} of a {b}?",
    "how does {a} affect {b}",
    "why is my {a} linked to {b}?",
    "where can i learn about {a} and {b}",
    "who explains {a} with {b}?",
]
PARAPHRASE_TEMPLATES = [
    "tell me about {a} and {b}",
    "explain {b} and {a}",
    "{a} {b} information",
]


def make_doc(rng, topic_words, forced):
    rest = [w for w in topic_words if w not in forced]
    words = list(forced) + rng.sample(rest, DOC_WORDS - len(forced))
    rng.shuffle(words)
    return " ".join(words) + "."


def make_split(rng, prefix, num_queries, num_negatives, reformulations=None):
    names = sorted(TOPICS)
    records = []
    for qi in range(num_queries):
        topic = names[qi % len(names)]
        a, b = rng.sample(TOPICS[topic], 2)
        query = rng.choice(QUERY_TEMPLATES).format(a=a, b=b)
        qid = f"{prefix}{qi:03d}"
        cands = [(make_doc(rng, TOPICS[topic], [a, b]), 1)]
        others = [t for t in names if t != topic]
        for _ in range(num_negatives):
            other = rng.choice(others)
            cands.append((make_doc(rng, TOPICS[other], rng.sample(TOPICS[other], 2)), 0))
        rng.shuffle(cands)
        for di, (text, label) in enumerate(cands):
            records.append({"query_id": qid, "query": query, "doc_id": f"{qid}-d{di}",
                            "doc": text, "label": label})
        if reformulations is not None:
            for tpl in PARAPHRASE_TEMPLATES:
                reformulations.append({"query_id": qid, "type": "paraphrase",
                                       "text": tpl.format(a=a, b=b)})
    return records


def write(path, rows):
    with open(path, "w", encoding="utf-8") as f:
        for row in rows:
            f.write(json.dumps(row) + "\n")


if __name__ == "__main__":
    rng = random.Random(20211)
    refs = []
    write("toy_train.jsonl", make_split(rng, "tr", 50, 7, refs))
    write("toy_train.reformulations.jsonl", refs)
    write("toy_valid.jsonl", make_split(rng, "va", 20, 7))
    write("toy_test.jsonl", make_split(rng, "te", 20, 7))
