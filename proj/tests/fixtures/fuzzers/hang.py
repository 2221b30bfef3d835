def fuzzer_hang(random: Random) -> str:
    while True:
        pass
