#include <iostream>

{{PROGRAM}}

int main() {
    {
        int expected = 6;
        int actual = abs_diff(2, 8);
        std::cout << "#CASE 0 " << (expected == actual ? "PASS" : "FAIL")
                  << " expected=" << expected << " actual=" << actual << "\n";
    }
    {
        int expected = 8;
        int actual = abs_diff(1, 9);
        std::cout << "#CASE 1 " << (expected == actual ? "PASS" : "FAIL")
                  << " expected=" << expected << " actual=" << actual << "\n";
    }
    {
        int expected = 0;
        int actual = abs_diff(4, 4);
        std::cout << "#CASE 2 " << (expected == actual ? "PASS" : "FAIL")
                  << " expected=" << expected << " actual=" << actual << "\n";
    }
    {
        int expected = 4;
        int actual = abs_diff(6, 2);
        std::cout << "#CASE 3 " << (expected == actual ? "PASS" : "FAIL")
                  << " expected=" << expected << " actual=" << actual << "\n";
    }
    return 0;
}
