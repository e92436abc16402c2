# Hand-stepped sentence BLEU used to freeze the golden value in metrics_test.cc
# and the acceptance suite. Uniform weights, max_n = 4, add-one smoothing on
# n-gram counts for n >= 2, standard brevity penalty.
import math
import re
from collections import Counter

def tokenize(text):
    out = []
    for word in text.lower().split():
        for piece in re.findall(r"[^\w\s]|[^\W]+", word, flags=re.ASCII):
            out.append(piece)
    return out

def ngrams(tokens, n):
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))

def bleu(candidate, reference, max_n=4):
    c, r = tokenize(candidate), tokenize(reference)
    log_sum = 0.0
    for n in range(1, max_n + 1):
        cand, ref = ngrams(c, n), ngrams(r, n)
        matched = sum(min(v, ref[g]) for g, v in cand.items())
        total = sum(cand.values())
        if n >= 2:
            matched, total = matched + 1, total + 1
        if matched == 0:
            return 0.0
        log_sum += math.log(matched / total) / max_n
    bp = 1.0 if len(c) > len(r) else math.exp(1.0 - len(r) / len(c))
    return bp * math.exp(log_sum)

if __name__ == "__main__":
    cand = "How do I renew my passport online?"
    ref = "What is the way to renew a passport online?"
    print(tokenize(cand), tokenize(ref))
    print(repr(bleu(cand, ref)))
