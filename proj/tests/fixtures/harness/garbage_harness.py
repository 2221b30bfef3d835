import sys

sys.stdout.write("12\nnot-a-number\n")
