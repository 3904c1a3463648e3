"""SPEA2 and SEMO/GSEMO on mOneMinMax, mLeadingOnesTrailingZeroes and mOneJumpZeroJump."""

__version__ = "0.1.0"
