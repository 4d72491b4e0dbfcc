"""
Entropy of a mixture
====================

The entropy of a mixture exceeds the average entropy of its components by
the weighted relative entropy of each component to the mixture. For
components with orthogonal supports that gap is the Shannon entropy of the
weights.
"""

import ssalab as sl

###############################################################################
# A generic three-component qutrit mixture.
mix = sl.random_mixture((3,), 3, rng=4)
rho = mix.mix()
avg = sum(w * sl.von_neumann_entropy(c) for w, c in zip(mix.weights, mix.components))
gap = sum(w * sl.relative_entropy(c, rho) for w, c in zip(mix.weights, mix.components))
print(f"S(mix) = {sl.von_neumann_entropy(rho):.10f}\navg S + sum w D = {avg + gap:.10f}")
print(f"H(w) = {sl.shannon_entropy(mix.weights):.4f} bounds the gap {gap:.4f}")

###############################################################################
# Orthogonal supports: the gap is exactly H(w).
orth = sl.orthogonal_mixture((2, 2), (1, 1, 2), (0.2, 0.3, 0.5), rng=4)
r = sl.verify.verify_lemma4(orth)
print(f"orthogonal: gap {r.context['mean_relative_entropy']:.10f}, H(w) {r.context['shannon']:.10f}")

###############################################################################
# Bipartite mixtures orthogonal on both sides add H(w) to every entropy, so
# the mutual information is the average plus H(w).
bi = sl.biorthogonal_mixture((4, 4), sl.BlockAllocation.uniform((2, 2)), (0.4, 0.6), rng=4)
r = sl.verify.verify_lemma3(bi)
print(f"I(1;2) = {r.lhs:.10f}   avg I + H(w) = {r.rhs:.10f}")

###############################################################################
# Generic mixtures do not meet that premise and the check says so.
try:
    sl.verify.verify_lemma3(sl.random_mixture((2, 2), 2, rng=0))
except sl.errors.PremiseError as exc:
    print("refused:", exc)
