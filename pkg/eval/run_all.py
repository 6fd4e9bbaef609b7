import random
import sys
import os

if __name__ == '__main__':
    random.seed(123)
    rep = 10
    suites = ['elliptic', 'recursion', 'premodular', 'painleve', 'asymptotics', 'zeros']
    out_dir = sys.argv[1] if len(sys.argv) > 1 else 'results'
    os.makedirs(out_dir, exist_ok=True)

    for suite in suites:
        for _ in range(rep):
            seed = random.randint(0, 1000000000)
            os.system('python -m premod --seed %d verify --suite %s > %s/%s_%d.json'
                      % (seed, suite, out_dir, suite, seed))
