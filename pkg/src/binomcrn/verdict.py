from enum import Enum


class Verdict(str, Enum):
    BINOMIAL = "UnconditionallyBinomial"
    NOT_BINOMIAL = "NotUnconditionallyBinomial"

    @classmethod
    def of(cls, ok: bool) -> "Verdict":
        return cls.BINOMIAL if ok else cls.NOT_BINOMIAL

    def __bool__(self) -> bool:
        return self is Verdict.BINOMIAL

    def __str__(self) -> str:
        return self.value
