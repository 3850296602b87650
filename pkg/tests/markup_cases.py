"""Malformed transcript corpus shared by the unit and acceptance suites."""

from ctxforge.episodes import markup as mk

# (text, expected error code) - every grammar violation class is covered
MALFORMED_CASES = [
    # unknown bracketed tokens
    ("[S1] hi [Laugh]", mk.UNKNOWN_TAG),
    ("[S4] hi", mk.UNKNOWN_TAG),
    ("[s1] hi", mk.UNKNOWN_TAG),
    ("[S1] hi [Overlap_Sx] no", mk.UNKNOWN_TAG),
    ("[S1] hi [Overlap_S4] no", mk.UNKNOWN_TAG),
    ("[S1] hi [overlap]there", mk.UNKNOWN_TAG),
    ("[] hi", mk.UNKNOWN_TAG),
    ("[ACT ] done", mk.UNKNOWN_TAG),
    ("[S1] hi [Overlap_Robot] no", mk.UNKNOWN_TAG),
    # dangling / stray overlap structure
    ("[S1] apple or [Overlap]banana?", mk.DANGLING_OVERLAP),
    ("[S1] apple or [Overlap]banana? [S2] pear", mk.DANGLING_OVERLAP),
    ("[S1] a [Overlap]b [Overlap]c [Overlap_S2] d", mk.DANGLING_OVERLAP),
    ("[S1] apple or [Overlap]banana? [Overlap_S1] banana!", mk.DANGLING_OVERLAP),
    ("[S1] hello [Overlap_S2] there", mk.STRAY_OVERLAP_REPLY),
    ("[Robot] on it [Overlap]now [ACT]", mk.DANGLING_OVERLAP),
    # action-onset misuse
    ("[S1] I will do it [ACT]", mk.MISPLACED_ACT),
    ("[Robot] I will [ACT] do it", mk.MISPLACED_ACT),
    ("[Robot] doing it [ACT] [Sound]", mk.MISPLACED_ACT),
    ("[Robot] one [ACT] two", mk.MISPLACED_ACT),
    ("[Robot] done [ACT] [ACT]", mk.MISPLACED_ACT),
    ("[Robot] done [ACT] [S1] thanks [Robot] again [ACT]", mk.DUPLICATE_ACT),
    # text outside any turn
    ("hello [S1] hi", mk.ORPHAN_TEXT),
    ("[Sound] [S1] hi", mk.ORPHAN_TEXT),
    ("[Overlap]x [S1] hi", mk.ORPHAN_TEXT),
]
