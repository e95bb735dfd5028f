#include <iostream>
#include <vector>

{{PROGRAM}}

int main() {
    {
        int expected = 6;
        int actual = sum_list({1, 2, 3});
        std::cout << "#CASE 0 " << (expected == actual ? "PASS" : "FAIL")
                  << " expected=" << expected << " actual=" << actual << "\n";
    }
    {
        int expected = 0;
        int actual = sum_list({});
        std::cout << "#CASE 1 " << (expected == actual ? "PASS" : "FAIL")
                  << " expected=" << expected << " actual=" << actual << "\n";
    }
    {
        int expected = 3;
        int actual = sum_list({-1, 4});
        std::cout << "#CASE 2 " << (expected == actual ? "PASS" : "FAIL")
                  << " expected=" << expected << " actual=" << actual << "\n";
    }
    {
        int expected = 10;
        int actual = sum_list({10});
        std::cout << "#CASE 3 " << (expected == actual ? "PASS" : "FAIL")
                  << " expected=" << expected << " actual=" << actual << "\n";
    }
    return 0;
}
