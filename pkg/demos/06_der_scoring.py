"""Diarization error rate, decomposed.
===================================

DER sums three error times over the reference speech: false alarm
(hypothesized speech where nobody talks), missed detection (speech nobody
hypothesized), and speaker confusion (speech assigned to a wrongly mapped
speaker under the best one-to-one speaker mapping). This script builds a
hypothesis whose errors are known by construction and shows the report
matching them, plus the effect of a forgiveness collar.
"""

from diarsep import Annotation, compute_der, optimal_mapping

# 100 s of reference speech from one speaker
reference = Annotation("demo", ((0.0, 100.0, "A"),))

# hypothesis: correct on [0, 84.4), a second (confused) speaker on
# [84.4, 92.3), silence until 100, then 4.8 s of false alarm
hypothesis = Annotation(
    "demo",
    (
        (0.0, 84.4, "h1"),
        (84.4, 7.9, "h2"),
        (100.0, 4.8, "h1"),
    ),
)

mapping = optimal_mapping(reference, hypothesis)
print("optimal speaker mapping:", mapping)

report = compute_der(reference, hypothesis)
print(f"false alarm      {report.false_alarm:6.2f} s  = {report.fa_pct:5.2f}%")
print(f"missed detection {report.missed:6.2f} s  = {report.md_pct:5.2f}%")
print(f"confusion        {report.confusion:6.2f} s  = {report.sc_pct:5.2f}%")
print(f"reference speech {report.total_speech:6.2f} s")
print(f"DER = {report.fa_pct:.1f} + {report.md_pct:.1f} + {report.sc_pct:.1f} "
      f"= {report.der_pct:.1f}%")

# -- a collar excludes +-c around every reference boundary ----------------------

ref = Annotation("demo", ((0.0, 10.0, "A"),))
hyp = Annotation("demo", ((0.3, 9.7, "B"),))  # 0.3 s late
strict = compute_der(ref, hyp)
relaxed = compute_der(ref, hyp, collar=0.5)
print(f"\n0.3 s late onset: DER {strict.der_pct:.2f}% without collar, "
      f"{relaxed.der_pct:.2f}% with a 0.5 s collar "
      f"(scored speech shrinks to {relaxed.total_speech:.1f} s)")

# -- evaluation regions restrict scoring to chosen spans ------------------------

windowed = compute_der(ref, hyp, eval_regions=[(2.0, 8.0)])
print(f"scoring only [2, 8) s: DER {windowed.der_pct:.2f}% "
      f"over {windowed.total_speech:.1f} s")
